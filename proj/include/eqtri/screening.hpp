#pragma once

/**
 * @file screening.hpp
 * @brief Mestre-Nagao screening, parameter-grid search over the three
 *        families, and checks of the published high-rank parameter rows.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "eqtri/arith.hpp"
#include "eqtri/curve.hpp"
#include "eqtri/families.hpp"
#include "eqtri/heights.hpp"

namespace eqtri {

// ---------------------------------------------------------------------------
// Mestre-Nagao sum
// ---------------------------------------------------------------------------

/// One summand (2 - a_p) / (p + 1 - a_p) * log p.
inline double s1_term(std::uint64_t p, std::int64_t ap) {
  auto pd = static_cast<double>(p);
  auto ad = static_cast<double>(ap);
  return (2.0 - ad) / (pd + 1.0 - ad) * std::log(pd);
}

/**
 * S1 over the given primes (ascending) at which the integral model
 * `curve` has good reduction. Bad primes are skipped.
 */
inline double mestre_nagao_s1(const WeierstrassCurve& curve, std::span<const std::uint64_t> primes) {
  if (!curve.is_integral()) throw DomainError("mestre_nagao_s1 needs an integral model");
  const BigInt& disc = curve.discriminant().get_num();
  double sum = 0.0;
  for (auto p : primes) {
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p)) continue;
    sum += s1_term(p, count_points_ap(curve, p));
  }
  return sum;
}

/// S1(X): all good primes p <= X.
inline double mestre_nagao_s1(const WeierstrassCurve& curve, std::uint64_t X) {
  if (X < 2) return 0.0;
  auto primes = sieve_primes(X);
  return mestre_nagao_s1(curve, primes);
}

/// Partial sum over good primes in (lo, hi].
inline double mestre_nagao_s1_range(const WeierstrassCurve& curve, std::uint64_t lo, std::uint64_t hi) {
  auto primes = sieve_primes(hi);
  auto offset = static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), lo) - primes.begin());
  return mestre_nagao_s1(curve, std::span<const std::uint64_t>(primes).subspan(offset));
}

// ---------------------------------------------------------------------------
// Fingerprints
// ---------------------------------------------------------------------------

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string ainvariants_string(const WeierstrassCurve& e) {
  std::string s = "[";
  for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + to_string(e.a_invariants()[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

using ParamBox = std::vector<std::vector<BigRat>>;

inline std::vector<BigRat> integer_range(long lo, long hi) {
  std::vector<BigRat> v;
  for (long i = lo; i <= hi; ++i) v.emplace_back(i);
  return v;
}

/// Distinct reduced fractions n/d with n in [lo, hi] and 1 <= d <= den_max, ascending.
inline std::vector<BigRat> rational_range(long lo, long hi, long den_max) {
  std::set<BigRat> vals;
  for (long d = 1; d <= std::max(1L, den_max); ++d)
    for (long n = lo; n <= hi; ++n) vals.insert(make_rat(n, d));
  return {vals.begin(), vals.end()};
}

struct ScreenRecord {
  FamilyTag family = FamilyTag::A;
  std::vector<BigRat> params;
  double s1 = 0.0;
  std::uint64_t X = 0;
  long rank_lower_bound = -1;  // -1: below threshold or unavailable
  double regulator = std::numeric_limits<double>::quiet_NaN();
  std::string fingerprint;
  std::vector<std::string> status;

  std::string status_string() const {
    std::string s;
    for (const auto& f : status) s += (s.empty() ? "" : "|") + f;
    return s;
  }
};

struct GridOptions {
  std::uint64_t X = 10'000;
  double s1_threshold = 0.0;
  std::size_t top_k = 0;  // 0 keeps every record
  unsigned workers = 1;
  std::uint64_t factor_budget = kDefaultFactorBudget;
  double tolerance = kDefaultIndependenceTol;
};

struct GridResult {
  std::vector<ScreenRecord> records;  // ranked, truncated to top_k
  std::size_t grid_size = 0;
  std::size_t evaluated = 0;                 // tuples that produced a record
  std::map<std::string, std::size_t> skipped;  // reason -> count
};

namespace detail {

struct TupleOutcome {
  std::optional<ScreenRecord> record;
  std::string skip_reason;
};

inline std::vector<BigRat> decode_tuple(const ParamBox& box, std::size_t index) {
  std::vector<BigRat> t(box.size());
  for (std::size_t d = box.size(); d-- > 0;) {
    t[d] = box[d][index % box[d].size()];
    index /= box[d].size();
  }
  return t;
}

}  // namespace detail

/// Screens one family instance: S1 on the minimal model when it can be
/// computed (else the integral model), then an independence verdict on
/// all marked points when S1 reaches the threshold.
inline ScreenRecord screen_instance(const FamilyInstance& inst, std::span<const std::uint64_t> primes,
                                    std::uint64_t X, const GridOptions& opt) {
  ScreenRecord rec;
  rec.family = inst.family;
  rec.params = inst.params;
  rec.X = X;
  std::optional<MinimalModel> mm;
  try {
    mm = minimal_model(inst.curve, opt.factor_budget);
  } catch (const IncompleteFactorization&) {
  }
  const WeierstrassCurve model = mm ? mm->curve : integral_model(inst.curve).curve;
  rec.status.push_back(mm ? "minimal" : "integral");
  rec.fingerprint = mm ? "mm:" + fnv1a_hex(ainvariants_string(mm->curve))
                       : "j:" + fnv1a_hex(to_string(inst.curve.j_invariant()));
  rec.s1 = mestre_nagao_s1(model, primes);
  if (rec.s1 < opt.s1_threshold) {
    rec.status.push_back("below_threshold");
    return rec;
  }
  if (!mm) {
    rec.status.push_back("heights_unavailable");
    return rec;
  }
  HeightContext ctx(inst.curve, {kDefaultHeightEps, opt.factor_budget});
  bool complete = true;
  RealMatrix g = gram_matrix(ctx, inst.point_list(), &complete);
  auto v = independence_from_gram(g, opt.tolerance);
  rec.rank_lower_bound = static_cast<long>(v.rank_lower_bound);
  rec.regulator = v.det.convert_to<double>();
  rec.status.push_back(complete ? "verdict" : "verdict_advisory");
  return rec;
}

/**
 * Evaluates every tuple of the box. Tuples whose construction fails are
 * counted per reason. Ranking: S1 descending, ties in lexicographic
 * parameter order. Output is identical for any worker count.
 */
inline GridResult grid_search(FamilyTag family, const ParamBox& box, const GridOptions& opt = {}) {
  GridResult result;
  if (box.size() != family_arity(family))
    throw DomainError("parameter box has " + std::to_string(box.size()) + " dimensions, family " +
                      to_string(family) + " needs " + std::to_string(family_arity(family)));
  ParamBox sorted = box;
  std::size_t total = box.empty() ? 0 : 1;
  for (auto& dim : sorted) {
    std::sort(dim.begin(), dim.end());
    dim.erase(std::unique(dim.begin(), dim.end()), dim.end());
    total *= dim.size();
  }
  result.grid_size = total;
  if (total == 0) return result;

  const auto primes = sieve_primes(opt.X);
  std::vector<detail::TupleOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      auto params = detail::decode_tuple(sorted, i);
      detail::TupleOutcome out;
      try {
        auto inst = build_family(family, params);
        out.record = screen_instance(inst, primes, opt.X, opt);
      } catch (const DegenerateSet&) {
        out.skip_reason = "DegenerateSet";
      } catch (const SingularCurve&) {
        out.skip_reason = "SingularCurve";
      } catch (const DomainError&) {
        out.skip_reason = "DomainError";
      } catch (const IncompleteFactorization&) {
        out.skip_reason = "IncompleteFactorization";
      }
      outcomes[i] = std::move(out);
    }
  };
  unsigned workers = std::max(1u, opt.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (auto& out : outcomes) {
    if (out.record) {
      result.records.push_back(std::move(*out.record));
      ++result.evaluated;
    } else {
      ++result.skipped[out.skip_reason];
    }
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const ScreenRecord& a, const ScreenRecord& b) { return a.s1 > b.s1; });
  if (opt.top_k > 0 && result.records.size() > opt.top_k) result.records.resize(opt.top_k);
  return result;
}

// ---------------------------------------------------------------------------
// Published parameter rows
// ---------------------------------------------------------------------------

struct TableRow {
  std::vector<BigRat> params;  // builder order
  int published_rank = 0;
};

struct TableFixture {
  int id = 0;
  FamilyTag family = FamilyTag::A;
  std::vector<std::string> columns;  // column order as printed
  std::vector<TableRow> rows;
};

inline std::vector<std::string> builder_param_names(FamilyTag f) {
  switch (f) {
    case FamilyTag::A: return {"p", "q", "r", "s", "t", "k"};
    case FamilyTag::B: return {"p", "q", "r", "h", "k"};
    case FamilyTag::C: return {"q", "s"};
  }
  return {};
}

/// Reads {"table", "family", "columns", "rows": [{"params": [...], "rank": n}]};
/// params follow `columns` and are reordered to builder order.
inline TableFixture parse_table_fixture(const nlohmann::json& j) {
  TableFixture t;
  t.id = j.at("table").get<int>();
  t.family = parse_family(j.at("family").get<std::string>());
  t.columns = j.at("columns").get<std::vector<std::string>>();
  auto names = builder_param_names(t.family);
  if (t.columns.size() != names.size()) throw DomainError("table fixture: wrong column count");
  std::vector<std::size_t> from(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = std::find(t.columns.begin(), t.columns.end(), names[i]);
    if (it == t.columns.end()) throw DomainError("table fixture: missing column " + names[i]);
    from[i] = static_cast<std::size_t>(it - t.columns.begin());
  }
  for (const auto& row : j.at("rows")) {
    auto raw = row.at("params").get<std::vector<std::string>>();
    if (raw.size() != names.size()) throw DomainError("table fixture: row has wrong arity");
    TableRow r;
    for (auto idx : from) r.params.push_back(parse_rational(raw[idx]));
    r.published_rank = row.at("rank").get<int>();
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline std::string default_data_dir() {
#ifdef EQTRI_DATA_DIR
  return EQTRI_DATA_DIR;
#else
  return "data";
#endif
}

inline TableFixture load_table_fixture(int id, const std::string& data_dir = default_data_dir()) {
  std::string path = data_dir + "/tables/table" + std::to_string(id) + ".json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table fixture " + path);
  return parse_table_fixture(nlohmann::json::parse(in));
}

struct TableRowReport {
  std::size_t row = 0;  // 1-based
  std::vector<BigRat> params;
  int published_rank = 0;
  bool constructed = false;
  bool points_on_curve = false;
  std::size_t rank_lower_bound = 0;
  std::size_t required = 0;
  double s1 = 0.0;
  std::string minimal_model;
  std::string error;
  bool pass = false;
};

struct TableReport {
  int table = 0;
  FamilyTag family = FamilyTag::A;
  std::uint64_t X = 0;
  std::vector<TableRowReport> rows;
  bool pairwise_distinct = true;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;  // 1-based row pairs
  bool pass = true;
};

/**
 * For each selected row (1-based; empty = all): the instance constructs,
 * the marked points are on the curve, and the independence verdict reaches
 * the family's generic bound. Selected rows must have pairwise distinct
 * minimal models. The published ranks themselves are not checked.
 */
inline TableReport reproduce_table(const TableFixture& fx, std::vector<std::size_t> rows = {},
                                   std::uint64_t X = 1000, std::uint64_t budget = kDefaultFactorBudget) {
  TableReport rep;
  rep.table = fx.id;
  rep.family = fx.family;
  rep.X = X;
  if (rows.empty())
    for (std::size_t i = 1; i <= fx.rows.size(); ++i) rows.push_back(i);
  const auto primes = sieve_primes(X);
  std::vector<std::optional<WeierstrassCurve>> minimal;
  for (auto idx : rows) {
    if (idx == 0 || idx > fx.rows.size()) throw DomainError("table row " + std::to_string(idx) + " out of range");
    const TableRow& row = fx.rows[idx - 1];
    TableRowReport rr;
    rr.row = idx;
    rr.params = row.params;
    rr.published_rank = row.published_rank;
    rr.required = family_generic_rank(fx.family);
    std::optional<WeierstrassCurve> mm;
    try {
      auto inst = build_family(fx.family, row.params);
      rr.constructed = true;
      rr.points_on_curve = std::all_of(inst.points.begin(), inst.points.end(),
                                       [&](const LabeledPoint& lp) { return is_on_curve(inst.curve, lp.point); });
      MinimalModel m = minimal_model(inst.curve, budget);
      mm = m.curve;
      rr.minimal_model = ainvariants_string(m.curve);
      rr.s1 = mestre_nagao_s1(m.curve, primes);
      auto v = independence_verdict(inst.curve, inst.point_list(), kDefaultIndependenceTol,
                                    {kDefaultHeightEps, budget});
      rr.rank_lower_bound = v.rank_lower_bound;
      rr.pass = rr.points_on_curve && rr.rank_lower_bound >= rr.required;
    } catch (const std::exception& ex) {
      rr.error = ex.what();
    }
    minimal.push_back(mm);
    rep.pass = rep.pass && rr.pass;
    rep.rows.push_back(std::move(rr));
  }
  for (std::size_t i = 0; i < minimal.size(); ++i)
    for (std::size_t j = i + 1; j < minimal.size(); ++j)
      if (minimal[i] && minimal[j] && *minimal[i] == *minimal[j]) {
        rep.pairwise_distinct = false;
        rep.duplicates.emplace_back(rep.rows[i].row, rep.rows[j].row);
      }
  rep.pass = rep.pass && rep.pairwise_distinct;
  return rep;
}

}  // namespace eqtri
