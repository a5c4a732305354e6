#include "freeprod/graded.hpp"

#include <algorithm>

namespace freeprod {

std::size_t GradedSpace::dim(const Word& w) const {
  const auto it = dims.find(w);
  return it == dims.end() ? 0 : it->second;
}

std::size_t GradedSpace::total() const {
  std::size_t n = 0;
  for (const auto& [w, d] : dims) n += d;
  return n;
}

GradedSpace star_space(CellId cell) { return GradedSpace{cell, cell, {{empty_word(cell), 1}}}; }

Matrix GradedMap::block(const Word& w) const {
  const auto it = blocks.find(w);
  if (it != blocks.end()) return it->second;
  return Matrix::Zero(codomain.dim(w), domain.dim(w));
}

void GradedMap::set_block(const Word& w, Matrix m) {
  if (static_cast<std::size_t>(m.rows()) != codomain.dim(w) || static_cast<std::size_t>(m.cols()) != domain.dim(w)) {
    throw LayoutError("graded block has the wrong shape");
  }
  blocks[w] = std::move(m);
}

GradedMap zero_map(const GradedSpace& domain, const GradedSpace& codomain) { return GradedMap{domain, codomain, {}}; }

GradedMap identity_map(const GradedSpace& space) {
  GradedMap out{space, space, {}};
  for (const auto& [w, d] : space.dims) out.blocks[w] = Matrix::Identity(d, d);
  return out;
}

GradedMap compose(const GradedMap& a, const GradedMap& b) {
  if (!(b.codomain == a.domain)) throw LayoutError("compose: codomain and domain differ");
  GradedMap out{b.domain, a.codomain, {}};
  for (const auto& [w, m] : b.blocks) {
    const auto it = a.blocks.find(w);
    if (it == a.blocks.end()) continue;
    out.blocks[w] = it->second * m;
  }
  return out;
}

GradedMap adjoint(const GradedMap& a) {
  GradedMap out{a.codomain, a.domain, {}};
  for (const auto& [w, m] : a.blocks) out.blocks[w] = m.adjoint();
  return out;
}

GradedMap add(const GradedMap& a, const GradedMap& b) {
  if (!(a.domain == b.domain) || !(a.codomain == b.codomain)) throw LayoutError("add: shapes differ");
  GradedMap out = a;
  for (const auto& [w, m] : b.blocks) {
    auto it = out.blocks.find(w);
    if (it == out.blocks.end()) {
      out.blocks[w] = m;
    } else {
      it->second += m;
    }
  }
  return out;
}

GradedMap scale(const GradedMap& a, Complex c) {
  GradedMap out = a;
  for (auto& [w, m] : out.blocks) m *= c;
  return out;
}

double deviation(const GradedMap& a, const GradedMap& b) {
  if (!(a.domain == b.domain) || !(a.codomain == b.codomain)) throw LayoutError("deviation: shapes differ");
  double worst = 0.0;
  for (const auto& [w, d] : a.domain.dims) {
    if (a.codomain.dim(w) == 0) continue;
    const Matrix diff = a.block(w) - b.block(w);
    if (diff.size() > 0) worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

double max_abs(const GradedMap& a) {
  double worst = 0.0;
  for (const auto& [w, m] : a.blocks) {
    if (m.size() > 0) worst = std::max(worst, m.cwiseAbs().maxCoeff());
  }
  return worst;
}

double unitarity_defect(const GradedMap& u) {
  if (!(u.domain.dims == u.codomain.dims)) return 1.0;
  double worst = 0.0;
  for (const auto& [w, d] : u.domain.dims) {
    const Matrix m = u.block(w);
    const Matrix id = Matrix::Identity(d, d);
    worst = std::max(worst, (m.adjoint() * m - id).cwiseAbs().maxCoeff());
    worst = std::max(worst, (m * m.adjoint() - id).cwiseAbs().maxCoeff());
  }
  return worst;
}

double operator_norm(const GradedMap& a) {
  double worst = 0.0;
  for (const auto& [w, m] : a.blocks) {
    if (m.size() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(m);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

}  // namespace freeprod
