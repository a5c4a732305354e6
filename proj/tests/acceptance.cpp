// Acceptance run: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "freeprod/free_fusion.hpp"
#include "freeprod/realization.hpp"
#include "freeprod/tlj.hpp"
#include "freeprod/verify.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Notes {
 public:
  void fail(const std::string& what) {
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) fail(what);
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << "; " << checks_ << " checks";
    if (failures_ > 0) os << ", " << failures_ << " failed, first: " << first_;
    return {failures_ == 0, os.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

std::vector<std::shared_ptr<const ConcreteCategory>> cats(std::initializer_list<const char*> names) {
  std::vector<std::shared_ptr<const ConcreteCategory>> out;
  for (const char* n : names) out.push_back(builtin_category(n));
  return out;
}

Amalgam glued(std::vector<CategorySpec> specs) {
  SharedCell s{"a", {}};
  for (std::size_t i = 0; i < specs.size(); ++i) s.injections[i] = specs[i].zero_cells().front();
  return Amalgam(std::move(specs), {s});
}

Amalgam rep_amalgam(const char* x, const char* y) {
  return glued({builtin_category(x)->spec(), builtin_category(y)->spec()});
}

Amalgam tlj_amalgam(double d1, double d2) { return glued({tlj_spec({d1, 0}), tlj_spec({d2, 0})}); }

oracle::Multiset as_strings(const Amalgam& am, const FreeDecomposition& d) {
  oracle::Multiset m;
  for (const auto& [w, n] : d.terms) m[to_string(am, w)] = n;
  return m;
}

// Decompositions met in criteria 1-4, revisited by criterion 5.
struct QdimLog {
  std::size_t count = 0;
  double worst = 0.0;
  std::size_t exact_checked = 0;
  std::vector<std::string> failures;

  void record(const Amalgam& am, const Word& v, const FreeDecomposition& d) {
    ++count;
    const double want = word_qdim(am, v);
    const double got = decomposition_qdim(am, d);
    const double dev = std::abs(got - want) / std::max(1.0, std::abs(want));
    worst = std::max(worst, dev);
    if (dev > 1e-9) failures.push_back(to_string(am, v));
    const auto ew = word_exact_qdim(am, v);
    const auto ed = decomposition_exact_qdim(am, d);
    if (ew && ed) {
      ++exact_checked;
      if (*ew != *ed) failures.push_back(to_string(am, v) + " (exact)");
    }
  }
};

QdimLog qdims;

std::vector<Word> words_upto(const Amalgam& am, std::size_t len, std::size_t depth) {
  return oracle::all_words(am, 0, len, depth, true);
}

Outcome criterion1() {
  Notes n;
  const Amalgam am = rep_amalgam("S3", "Z2");
  const auto reduced = enumerate_reduced(am, 0, 0, 4, kUnbounded);
  for (const auto& w : reduced) {
    for (const auto& w2 : reduced) {
      const auto h = hom_dim_words(am, w, w2);
      n.expect(h == (w == w2 ? 1u : 0u), "hom(" + to_string(am, w) + ", " + to_string(am, w2) + ")");
    }
  }
  const auto general = words_upto(am, 5, kUnbounded);
  for (const auto& v : general) {
    const auto d = decompose_word(am, v);
    qdims.record(am, v, d);
    for (const auto& [w, m] : d.terms) n.expect(m > 0 && is_reduced(am, w), "term of " + to_string(am, v));
  }
  return n.outcome(std::to_string(reduced.size()) + " reduced words of length <= 4, " +
                   std::to_string(general.size()) + " general words of length <= 5 over Rep(S3)*Rep(Z2)");
}

Outcome criterion2() {
  Notes n;
  std::size_t total = 0;
  const std::vector<std::pair<std::string, Amalgam>> cases = {
      {"Rep(Z2)*Rep(Z2)", rep_amalgam("Z2", "Z2")},
      {"Rep(S3)*Rep(Z2)", rep_amalgam("S3", "Z2")},
      {"TLJ(2.5)*TLJ(3)", tlj_amalgam(2.5, 3.0)},
  };
  for (const auto& [name, am] : cases) {
    oracle::Rewriter rw{am, {}};
    for (const auto& v : words_upto(am, 5, 2)) {
      ++total;
      const auto d = decompose_word(am, v);
      qdims.record(am, v, d);
      n.expect(as_strings(am, d) == rw(v), name + " " + to_string(am, v));
    }
  }
  return n.outcome(std::to_string(total) + " general words of length <= 5 (TLJ letters up to f2)");
}

Outcome criterion3() {
  Notes n;
  const std::vector<std::uint64_t> expect{1, 1, 2, 5, 14, 42, 132};
  const auto ballot = oracle::ballot_end_dims(6);
  n.expect(ballot == expect, "ballot oracle");
  for (double delta : {2.0, 2.5, 3.0}) {
    const PointedSpec p = pointed_tlj({delta, 0});
    n.expect(box_dims(p, 6) == expect, "box_dims at delta " + std::to_string(delta));
    const Amalgam am({p.ambient});
    oracle::Rewriter rw{am, {}};
    for (std::size_t k = 1; k <= 6; ++k) {
      std::vector<Letter> ls;
      for (std::size_t j = 0; j < k; ++j) ls.push_back({0, j % 2 == 0 ? "f1_ab" : "f1_ba"});
      const Word v = make_word(am, ls);
      const auto d = decompose_word(am, v);
      qdims.record(am, v, d);
      n.expect(oracle::end_dim(as_strings(am, d)) == ballot[k], "end dim of " + to_string(am, v));
      n.expect(oracle::end_dim(rw(v)) == ballot[k], "rewriting end dim of " + to_string(am, v));
    }
  }
  return n.outcome("1,1,2,5,14,42,132 for delta in {2, 2.5, 3}");
}

Outcome criterion4() {
  Notes n;
  const std::vector<std::uint64_t> expect{1, 1, 3, 12, 55, 273};
  for (std::size_t k = 0; k < expect.size(); ++k) n.expect(oracle::fuss_catalan(k) == expect[k], "formula");
  for (const auto& [d1, d2] : {std::pair{2.0, 2.0}, std::pair{2.5, 3.0}}) {
    const std::string tag = "(" + std::to_string(d1) + ", " + std::to_string(d2) + ")";
    const PointedSpec p1 = pointed_tlj({d1, 0});
    const PointedSpec p2 = pointed_tlj({d2, 0});
    n.expect(box_dims(free_compose(p1, p2), 5) == expect, "box_dims " + tag);

    const Amalgam am({p1.ambient, p2.ambient}, {SharedCell{"c", {{0, "b"}, {1, "a"}}}});
    oracle::Rewriter rw{am, {}};
    for (std::size_t k = 1; k <= 5; ++k) {
      std::vector<Letter> ls;
      for (std::size_t j = 0; j < k; ++j) {
        if (j % 2 == 0) {
          ls.push_back({0, "f1_ab"});
          ls.push_back({1, "f1_ab"});
        } else {
          ls.push_back({1, "f1_ba"});
          ls.push_back({0, "f1_ba"});
        }
      }
      const Word v = make_word(am, ls);
      const auto d = decompose_word(am, v);
      qdims.record(am, v, d);
      const auto oracle_dim = oracle::end_dim(rw(v));
      n.expect(oracle_dim == expect[k], "rewriting end dim " + tag + " at " + std::to_string(k));
      n.expect(oracle::end_dim(as_strings(am, d)) == oracle_dim, "end dim " + tag + " at " + std::to_string(k));
    }
  }
  return n.outcome("1,1,3,12,55,273 for (2, 2) and (2.5, 3), (3n choose n)/(2n+1)");
}

Outcome criterion5() {
  Notes n;
  n.expect(qdims.count > 0, "no decompositions recorded");
  for (const auto& f : qdims.failures) n.fail(f);
  std::ostringstream os;
  os << qdims.count << " decompositions, worst relative deviation " << qdims.worst << ", " << qdims.exact_checked
     << " compared exactly";
  return n.outcome(os.str());
}

Outcome criterion6() {
  Notes n;
  const FreeRealization r(cats({"S3", "Z2"}));
  const Amalgam& am = r.amalgam();
  std::size_t words = 0;
  for (const auto& v : oracle::all_words(am, 0, 4, kUnbounded, true)) {
    ++words;
    const GradedSpace s = r.word_space(v, r.star());
    const auto d = decompose_word(am, v);
    for (const auto& [w, dim] : s.dims) n.expect(dim == mult_in_word(am, w, v), to_string(am, v) + " at " + to_string(am, w));
    for (const auto& [w, m] : d.terms) n.expect(s.dim(w) == m, to_string(am, v) + " term " + to_string(am, w));
  }
  return n.outcome(std::to_string(words) + " words of length <= 4 over Rep(S3)*Rep(Z2)");
}

// Each tag comes with the loosest tolerance the criterion allows.
Outcome from_reports(const std::vector<CheckGroup>& groups, const std::vector<std::pair<std::string, double>>& tags,
                     const std::vector<std::vector<std::shared_ptr<const ConcreteCategory>>>& factor_sets) {
  Notes n;
  double worst = 0.0;
  std::string names;
  for (const auto& fs : factor_sets) {
    const FreeRealization r(fs);
    const auto report = verify_groups(r, groups, VerifyOptions{});
    names += (names.empty() ? "" : ", ") + report.amalgam;
    for (const auto& [tag, tolerance] : tags) {
      const CheckResult* c = report.find(tag);
      n.expect(c != nullptr, "missing " + tag);
      if (c == nullptr) continue;
      n.expect(c->pass && c->tolerance <= tolerance, report.amalgam + " " + tag + " " + c->instance);
      worst = std::max(worst, c->max_deviation);
    }
  }
  std::ostringstream os;
  os << names << ", worst deviation " << worst;
  return n.outcome(os.str());
}

Outcome criterion7() {
  return from_reports({CheckGroup::unitarity},
                      {{"left-associator-unitary", kExactTolerance},
                       {"right-associator-unitary", kExactTolerance},
                       {"left-unitor-unitary", kExactTolerance},
                       {"right-unitor-unitary", kExactTolerance},
                       {"swap-unitary-distinct", kExactTolerance},
                       {"swap-unitary-same", kExactTolerance},
                       {"vacuum-flip-unitary", kExactTolerance}},
                      {cats({"Z3", "Z2"}), cats({"S3", "Z2"})});
}

Outcome criterion8() {
  return from_reports({CheckGroup::coherence},
                      {{"left-module-associativity", kDiagramTolerance},
                       {"left-module-unit", kDiagramTolerance},
                       {"right-module-associativity", kDiagramTolerance},
                       {"right-module-unit", kDiagramTolerance},
                       {"commutant-associativity", kDiagramTolerance},
                       {"commutant-unit", kDiagramTolerance}},
                      {cats({"Z3", "Z2"}), cats({"S3", "Z2"})});
}

Outcome criterion9() {
  return from_reports({CheckGroup::assembly},
                      {{"assembly-orthogonality", kExactTolerance},
                       {"assembly-left-identity", kExactTolerance},
                       {"assembly-right-identity", kExactTolerance}},
                      {cats({"Z3", "Z2"})});
}

Outcome criterion10() {
  return from_reports({CheckGroup::functor, CheckGroup::extension},
                      {{"functor-identity", kExactTolerance},
                       {"functor-composition", kExactTolerance},
                       {"functor-involution", kExactTolerance},
                       {"functor-tensor-left", kExactTolerance},
                       {"functor-tensor-right", kExactTolerance},
                       {"factor-embedding-fully-faithful", kDiagramTolerance},
                       {"extension-dimension", 0.0}},
                      {cats({"Z3", "Z2"}), cats({"S3", "Z2"})});
}

Outcome criterion11() {
  Notes n;
  const std::vector<std::pair<std::string, Mutations>> mutations = {
      {"left associator scalar", Mutations{.drop_assoc_scalar = true}},
      {"outer swap scalar", Mutations{.drop_sigma_outer = true}},
      {"inner swap scalar", Mutations{.drop_sigma_inner = true}},
      {"universal functor weight", Mutations{.drop_universal_weight = true}},
  };
  const std::vector<CheckGroup> groups{CheckGroup::unitarity, CheckGroup::coherence, CheckGroup::extension,
                                       CheckGroup::assembly, CheckGroup::functor};
  std::string caught;
  for (const auto& [name, m] : mutations) {
    const FreeRealization r(cats({"S3", "Z2"}), m);
    const auto report = verify_groups(r, groups, VerifyOptions{});
    std::size_t failed = 0;
    for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
    n.expect(failed > 0, name + " goes unnoticed");
    caught += (caught.empty() ? "" : ", ") + name + ": " + std::to_string(failed);
  }
  return n.outcome("failing checks per mutation over Rep(S3)*Rep(Z2): " + caught);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"reduced-word fusion", criterion1},      {"oracle equivalence", criterion2},
      {"Catalan box dimensions", criterion3},   {"Fuss-Catalan box dimensions", criterion4},
      {"qdim conservation", criterion5},        {"grading bridge", criterion6},
      {"structure-map unitarity", criterion7},  {"coherence diagrams", criterion8},
      {"assembly relations", criterion9},       {"universal functor laws", criterion10},
      {"mutation sensitivity", criterion11},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << "  ["
              << o.detail << "; " << std::fixed << std::setprecision(2) << secs << " s]" << std::defaultfloat
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
