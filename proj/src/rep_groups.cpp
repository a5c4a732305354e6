#include "freeprod/rep_groups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace freeprod {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

FiniteGroup make_group(std::string name, std::vector<std::string> labels, const std::vector<std::size_t>& flat) {
  const std::size_t n = labels.size();
  if (n == 0) throw StructuralError("group '" + name + "' has no elements");
  if (flat.size() != n * n) {
    throw StructuralError("group '" + name + "': table has " + std::to_string(flat.size()) + " entries, expected " +
                          std::to_string(n * n));
  }
  FiniteGroup g;
  g.name = std::move(name);
  g.order = n;
  g.labels = std::move(labels);
  g.mul.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> seen(n, false);
    for (std::size_t b = 0; b < n; ++b) {
      const auto c = flat[a * n + b];
      if (c >= n) throw StructuralError("group '" + g.name + "': table entry out of range");
      if (seen[c]) throw StructuralError("group '" + g.name + "': row " + g.labels[a] + " is not a permutation");
      seen[c] = true;
      g.mul[a][b] = c;
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = g.mul[e][a] == a && g.mul[a][e] == a;
    if (ok) {
      g.identity = e;
      found = true;
    }
  }
  if (!found) throw StructuralError("group '" + g.name + "' has no identity");
  g.inv.assign(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (g.mul[a][b] == g.identity && g.mul[b][a] == g.identity) g.inv[a] = b;
    }
    if (g.inv[a] == n) throw StructuralError("group '" + g.name + "': " + g.labels[a] + " has no inverse");
  }
  // exhaustive up to order 24, strided beyond
  const std::size_t stride = n <= 24 ? 1 : n / 24 + 1;
  for (std::size_t a = 0; a < n; a += stride) {
    for (std::size_t b = 0; b < n; b += stride) {
      for (std::size_t c = 0; c < n; ++c) {
        if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]]) {
          throw StructuralError("group '" + g.name + "' is not associative at (" + g.labels[a] + ", " + g.labels[b] +
                                ", " + g.labels[c] + ")");
        }
      }
    }
  }
  return g;
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw ArgumentError("cyclic group of order 0");
  std::vector<std::string> labels;
  std::vector<std::size_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "e" : (a == 1 ? "x" : "x" + std::to_string(a)));
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = (a + b) % n;
  }
  return make_group("Z" + std::to_string(n), std::move(labels), table);
}

namespace {

const std::vector<std::array<int, 3>> kS3 = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

}  // namespace

FiniteGroup symmetric_group_3() {
  std::vector<std::size_t> table(36);
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = kS3[a][kS3[b][x]];
      table[a * 6 + b] = std::find(kS3.begin(), kS3.end(), c) - kS3.begin();
    }
  }
  return make_group("S3", {"e", "(23)", "(12)", "(123)", "(132)", "(13)"}, table);
}

std::vector<UnitaryRep> cyclic_irreps(std::size_t n) {
  std::vector<UnitaryRep> out;
  for (std::size_t k = 0; k < n; ++k) {
    UnitaryRep r{k == 0 ? "1" : (k == 1 ? "g" : "g" + std::to_string(k)), 1, {}};
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      Matrix mat(1, 1);
      mat(0, 0) = std::polar(1.0, angle);
      if (k * m % n == 0) mat(0, 0) = 1.0;
      r.matrices.push_back(mat);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<UnitaryRep> s3_irreps() {
  UnitaryRep triv{"triv", 1, {}};
  UnitaryRep sgn{"sgn", 1, {}};
  UnitaryRep std2{"std", 2, {}};
  Matrix q(3, 2);
  const double a = 1.0 / std::sqrt(2.0);
  const double b = 1.0 / std::sqrt(6.0);
  q << a, b, -a, b, 0.0, -2.0 * b;
  for (const auto& p : kS3) {
    Matrix perm = Matrix::Zero(3, 3);
    for (int x = 0; x < 3; ++x) perm(p[x], x) = 1.0;
    int inversions = 0;
    for (int x = 0; x < 3; ++x) {
      for (int y = x + 1; y < 3; ++y) inversions += p[x] > p[y];
    }
    triv.matrices.push_back(Matrix::Ones(1, 1));
    sgn.matrices.push_back(Matrix::Constant(1, 1, inversions % 2 == 0 ? 1.0 : -1.0));
    std2.matrices.push_back(q.adjoint() * perm * q);
  }
  return {triv, sgn, std2};
}

// ---------------------------------------------------------------------------

std::vector<Matrix> intertwiners(const std::vector<Matrix>& x, const std::vector<Matrix>& y, double tolerance) {
  if (x.size() != y.size() || x.empty()) throw ArgumentError("intertwiners: matrix families differ in length");
  const auto dx = x.front().rows();
  const auto dy = y.front().rows();
  const auto n = dx * dy;
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t g = 0; g < x.size(); ++g) p += kron(y[g].conjugate(), x[g]);
  p /= static_cast<double>(x.size());
  const auto rank = static_cast<std::size_t>(std::llround(p.trace().real()));

  std::vector<Vector> chosen;
  for (Eigen::Index k = 0; k < dx && chosen.size() < rank; ++k) {
    for (Eigen::Index l = 0; l < dy && chosen.size() < rank; ++l) {
      Vector v = p.col(l * dx + k);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& c : chosen) v -= c.dot(v) * c;
      }
      const double norm = v.norm();
      if (norm > tolerance) chosen.push_back(v / norm);
    }
  }
  std::vector<Matrix> out;
  out.reserve(chosen.size());
  for (const auto& v : chosen) out.push_back(Eigen::Map<const Matrix>(v.data(), dx, dy));
  return out;
}

struct ConcreteCategory::Cache {
  std::mutex mutex;
  std::map<Object, std::vector<Matrix>> mats;
  std::map<std::pair<Object, IrrId>, std::vector<Matrix>> bases;
};

std::shared_ptr<const ConcreteCategory> ConcreteCategory::build(FiniteGroup group, std::vector<UnitaryRep> reps,
                                                                Options options) {
  std::shared_ptr<ConcreteCategory> cat(new ConcreteCategory());
  cat->name_ = "Rep(" + group.name + ")";
  cat->cache_ = std::make_shared<Cache>();
  const double tol = options.tolerance;
  const auto order = group.order;
  if (reps.empty()) throw StructuralError(cat->name_ + ": no representations given");

  for (auto& r : reps) {
    if (r.matrices.size() != order) {
      throw StructuralError(cat->name_ + ": rep '" + r.label + "' has " + std::to_string(r.matrices.size()) +
                            " matrices for a group of order " + std::to_string(order));
    }
    r.dim = static_cast<std::size_t>(r.matrices.front().rows());
    for (const auto& m : r.matrices) {
      if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != r.dim || r.dim == 0) {
        throw StructuralError(cat->name_ + ": rep '" + r.label + "' has matrices of inconsistent shape");
      }
    }
    const auto id = Matrix::Identity(r.dim, r.dim);
    for (std::size_t g = 0; g < order; ++g) {
      if (max_abs(r.matrices[g] * r.matrices[g].adjoint() - id) > tol) {
        throw StructuralError(cat->name_ + ": rep '" + r.label + "' is not unitary at " + group.labels[g]);
      }
      for (std::size_t h = 0; h < order; ++h) {
        if (max_abs(r.matrices[g] * r.matrices[h] - r.matrices[group.mul[g][h]]) > tol) {
          throw StructuralError(cat->name_ + ": rep '" + r.label + "' is not a homomorphism at (" + group.labels[g] +
                                ", " + group.labels[h] + ")");
        }
      }
    }
    if (intertwiners(r.matrices, r.matrices).size() != 1) {
      throw StructuralError(cat->name_ + ": rep '" + r.label + "' is reducible");
    }
    if (!cat->reps_.emplace(r.label, r).second) throw StructuralError(cat->name_ + ": duplicate label '" + r.label + "'");
  }
  for (const auto& [l, r] : cat->reps_) {
    cat->irrs_.push_back(l);
    if (r.dim == 1 && cat->unit_.empty()) {
      bool trivial = true;
      for (const auto& m : r.matrices) trivial = trivial && std::abs(m(0, 0) - 1.0) <= tol;
      if (trivial) cat->unit_ = l;
    }
  }
  if (cat->unit_.empty()) throw StructuralError(cat->name_ + ": the trivial representation is missing");
  for (std::size_t a = 0; a < cat->irrs_.size(); ++a) {
    for (std::size_t b = a + 1; b < cat->irrs_.size(); ++b) {
      const auto& ra = cat->reps_.at(cat->irrs_[a]);
      const auto& rb = cat->reps_.at(cat->irrs_[b]);
      if (ra.dim == rb.dim && !intertwiners(ra.matrices, rb.matrices).empty()) {
        throw StructuralError(cat->name_ + ": reps '" + ra.label + "' and '" + rb.label + "' are isomorphic");
      }
    }
  }
  if (options.complete) {
    std::size_t sum = 0;
    for (const auto& [l, r] : cat->reps_) sum += r.dim * r.dim;
    if (sum != order) {
      throw StructuralError(cat->name_ + ": squared dimensions add up to " + std::to_string(sum) + ", not " +
                            std::to_string(order));
    }
  }
  cat->group_ = std::move(group);

  // conjugates and standard solutions
  FusionTable table;
  table.name = cat->name_;
  table.exact = true;
  table.zero_cells = {"a"};
  table.units["a"] = cat->unit_;
  for (const auto& l : cat->irrs_) {
    const auto& r = cat->reps_.at(l);
    std::vector<Matrix> conj;
    for (const auto& m : r.matrices) conj.push_back(m.conjugate());
    std::optional<IrrId> bar;
    Matrix j;
    for (const auto& l2 : cat->irrs_) {
      const auto& r2 = cat->reps_.at(l2);
      if (r2.dim != r.dim) continue;
      const auto b = intertwiners(r2.matrices, conj);
      if (!b.empty()) {
        bar = l2;
        j = b.front() * std::sqrt(static_cast<double>(r.dim));
        break;
      }
    }
    if (!bar) throw StructuralError(cat->name_ + ": the conjugate of '" + l + "' is not among the given reps");
    const auto d = static_cast<Eigen::Index>(r.dim);
    Matrix s = Matrix::Zero(d * d, 1);
    Matrix t = Matrix::Zero(d * d, 1);
    for (Eigen::Index k = 0; k < d; ++k) {
      Matrix e = Matrix::Zero(d, 1);
      e(k, 0) = 1.0;
      s += kron(e, j * e);
      t += kron(j * e, e);
    }
    cat->s_[l] = s;
    cat->t_[l] = t;
    const auto dim = static_cast<std::int64_t>(r.dim);
    table.irreducibles.push_back(IrrInfo{l, "a", "a", *bar, static_cast<double>(dim), Rational(dim), 0});
  }
  for (const auto& a : cat->irrs_) {
    for (const auto& b : cat->irrs_) {
      FusionEntry entry{a, b, {}};
      std::size_t total = 0;
      for (const auto& c : cat->irrs_) {
        const auto n = cat->basis(cat->normalize({a, b}), c).size();
        if (n > 0) entry.result[c] = n;
        total += n * cat->reps_.at(c).dim;
      }
      if (total != cat->reps_.at(a).dim * cat->reps_.at(b).dim) {
        throw StructuralError(cat->name_ + ": " + a + " (x) " + b + " does not decompose into the given reps");
      }
      table.fusion.push_back(std::move(entry));
    }
  }
  cat->spec_ = make_table_spec(std::move(table));
  return cat;
}

const UnitaryRep& ConcreteCategory::rep(const IrrId& irr) const {
  const auto it = reps_.find(irr);
  if (it == reps_.end()) throw LookupError(name_ + " has no irreducible '" + irr + "'");
  return it->second;
}

Object ConcreteCategory::normalize(const Object& x) const {
  Object out;
  for (const auto& irr : x) {
    rep(irr);
    if (irr != unit_) out.push_back(irr);
  }
  return out;
}

std::size_t ConcreteCategory::carrier_dim(const Object& x) const {
  std::size_t d = 1;
  for (const auto& irr : x) d *= rep(irr).dim;
  return d;
}

Matrix ConcreteCategory::rep_matrix(const Object& x, std::size_t g) const {
  Matrix m = Matrix::Ones(1, 1);
  for (const auto& irr : x) m = kron(m, rep(irr).matrices.at(g));
  return m;
}

const std::vector<Matrix>& ConcreteCategory::basis(const Object& x0, const IrrId& pi) const {
  const Object x = normalize(x0);
  rep(pi);
  auto key = std::make_pair(x, pi);
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->bases.find(key);
    if (it != cache_->bases.end()) return it->second;
  }
  std::vector<Matrix> xm;
  xm.reserve(group_.order);
  for (std::size_t g = 0; g < group_.order; ++g) xm.push_back(rep_matrix(x, g));
  auto b = intertwiners(xm, rep(pi).matrices);
  std::lock_guard lock(cache_->mutex);
  return cache_->bases.emplace(std::move(key), std::move(b)).first->second;
}

const Matrix& ConcreteCategory::s(const IrrId& irr) const {
  rep(irr);
  return s_.at(irr);
}

const Matrix& ConcreteCategory::t(const IrrId& irr) const {
  rep(irr);
  return t_.at(irr);
}

Complex ConcreteCategory::categorical_trace(const IrrId& irr, const Matrix& T) const {
  const auto d = static_cast<Eigen::Index>(rep(irr).dim);
  if (T.rows() != d || T.cols() != d) throw ArgumentError("categorical_trace: shape mismatch for '" + irr + "'");
  const Matrix& sv = s_.at(irr);
  return (sv.adjoint() * kron(T, Matrix::Identity(d, d)) * sv)(0, 0);
}

std::size_t ConcreteCategory::hom_dim(const Object& x, const Object& y) const {
  std::size_t total = 0;
  for (const auto& pi : irrs_) total += basis(x, pi).size() * basis(y, pi).size();
  return total;
}

std::vector<Matrix> intertwiner_basis(const ConcreteCategory& cat, const Object& x, const IrrId& pi) {
  return cat.basis(x, pi);
}

Complex categorical_trace(const ConcreteCategory& cat, const IrrId& irr, const Matrix& T) {
  return cat.categorical_trace(irr, T);
}

std::shared_ptr<const ConcreteCategory> builtin_category(const std::string& name) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const ConcreteCategory>> cache;
  std::lock_guard lock(mutex);
  const auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const ConcreteCategory> cat;
  if (name == "S3") {
    cat = ConcreteCategory::build(symmetric_group_3(), s3_irreps(), {true, 1e-10});
  } else if (name.size() == 2 && name[0] == 'Z' && name[1] >= '1' && name[1] <= '6') {
    const std::size_t n = static_cast<std::size_t>(name[1] - '0');
    cat = ConcreteCategory::build(cyclic_group(n), cyclic_irreps(n), {true, 1e-10});
  } else {
    throw LookupError("no built-in group '" + name + "' (known: Z1..Z6, S3)");
  }
  cache.emplace(name, cat);
  return cat;
}

}  // namespace freeprod
