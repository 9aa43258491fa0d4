#pragma once

#include "metric_lab/certify.hpp"
#include "metric_lab/errors.hpp"
#include "metric_lab/hull.hpp"
#include "metric_lab/interval_set.hpp"
#include "metric_lab/io.hpp"
#include "metric_lab/lipschitz.hpp"
#include "metric_lab/random.hpp"
#include "metric_lab/subset_space.hpp"
#include "metric_lab/ternary.hpp"
#include "metric_lab/vector.hpp"
