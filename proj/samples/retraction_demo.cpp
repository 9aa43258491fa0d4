// Retract a few 3-point subsets of the plane to 2-point subsets and show the
// chain of maps used to compare two of them.
#include <iostream>

#include "metric_lab/metric_lab.hpp"

int main() {
  const mlab::NormSpec l2;
  const auto e = mlab::parse_subset("0,0 | 3,0 | 0,4");
  std::cout << "E        = " << mlab::format_subset(e) << '\n';
  std::cout << "rho(E)   = " << mlab::format_subset(mlab::retraction_3_to_2(e, l2)) << '\n';

  const auto e2 = mlab::parse_subset("0,0.1 | 3,0 | 0.1,4");
  const auto chain = mlab::replay_retraction_chain(e, e2, l2);
  std::cout << "d_H(E, E2)          = " << chain.delta << '\n'
            << "d_H(rho E, rho E2)  = " << chain.total << '\n'
            << "forward / backward  = " << chain.forward << " / " << chain.backward << '\n';

  for (const auto* name : {"p1", "pinf"}) {
    const auto spec = mlab::parse_norm_spec(name);
    std::cout << name << ": rho(E) = " << mlab::format_subset(mlab::retraction_3_to_2(e, spec)) << '\n';
  }
}
