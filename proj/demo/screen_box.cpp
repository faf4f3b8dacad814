// Screens a small family-A box and prints the five best S1 scores.

#include <iostream>

#include "eqtri/screening.hpp"

int main() {
  eqtri::ParamBox box = {eqtri::integer_range(1, 3), eqtri::integer_range(1, 4), eqtri::integer_range(1, 3),
                         eqtri::integer_range(1, 4), eqtri::integer_range(1, 2), eqtri::integer_range(1, 2)};
  eqtri::GridOptions opt;
  opt.X = 2000;
  opt.top_k = 5;
  opt.s1_threshold = 1e9;  // S1 only
  auto res = eqtri::grid_search(eqtri::FamilyTag::A, box, opt);
  std::cout << res.evaluated << " of " << res.grid_size << " tuples scored\n";
  for (const auto& r : res.records) {
    std::cout << "S1 = " << r.s1 << " at";
    for (const auto& p : r.params) std::cout << ' ' << eqtri::to_string(p);
    std::cout << "\n";
  }
}
