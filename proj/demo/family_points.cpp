// Builds the family-B curve at (p,q,r,h,k) = (2,2,4,1,-1), prints its
// points and the height pairing of the six independent ones.

#include <iomanip>
#include <iostream>

#include "eqtri/families.hpp"
#include "eqtri/heights.hpp"

int main() {
  auto f = eqtri::build_family_B(2, 2, 4, 1, -1);
  std::cout << "curve a-invariants:";
  for (const auto& a : f.curve.a_invariants()) std::cout << ' ' << eqtri::to_string(a);
  std::cout << "\n";
  for (const auto& lp : f.points)
    std::cout << lp.label << " = (" << eqtri::to_string(lp.point.x()) << ", " << eqtri::to_string(lp.point.y())
              << ")\n";

  auto rep = eqtri::regulator(f.curve, f.subset(f.independent_subset));
  std::cout << std::setprecision(15) << "regulator " << rep.regulator << ", rank >= " << rep.rank_lower_bound
            << "\n";
}
