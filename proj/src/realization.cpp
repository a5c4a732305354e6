#include "freeprod/realization.hpp"

#include <cmath>
#include <functional>
#include <tuple>

#include "freeprod/free_fusion.hpp"

namespace freeprod {

namespace {

Complex pairing(const Matrix& b, const Matrix& x) { return (b.adjoint() * x).trace(); }

Object join(const Object& a, const Object& b) {
  Object out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

const Block* find_block(const std::vector<Block>& blocks, const IrrId& gamma) {
  for (const auto& b : blocks) {
    if (b.gamma == gamma) return &b;
  }
  return nullptr;
}

const Block* find_block(const ActionResult& a, const Word& u, const IrrId& gamma) {
  const auto it = a.layout.find(u);
  return it == a.layout.end() ? nullptr : find_block(it->second, gamma);
}

const Block* find_block(const ActionResult& a, const Word& u, const IrrId& gamma, const Word& source) {
  const Block* b = find_block(a, u, gamma);
  return b != nullptr && b->source == source ? b : nullptr;
}

Matrix identity(std::size_t n) { return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)); }

}  // namespace

struct FreeRealization::Cache {
  using SwapKey = std::tuple<Word, std::map<Word, std::size_t>, std::size_t, Object>;
  std::mutex mutex;
  std::map<Word, std::vector<ActionResult>> stages;
  std::map<std::tuple<Word, Word, std::size_t>, Matrix> assembly;
  std::map<SwapKey, GradedMap> swaps;
};

FreeRealization::FreeRealization(std::vector<std::shared_ptr<const ConcreteCategory>> factors, Mutations mutations)
    : cats_(std::move(factors)), mutations_(mutations), cache_(std::make_shared<Cache>()) {
  if (cats_.empty()) throw ArgumentError("realization needs at least one factor");
  std::vector<CategorySpec> specs;
  SharedCell glued{"*", {}};
  for (std::size_t i = 0; i < cats_.size(); ++i) {
    if (!cats_[i]) throw ArgumentError("null factor category");
    const auto cells = cats_[i]->spec().zero_cells();
    if (cells.size() != 1) throw UnsupportedFactorError("realization needs single-0-cell factors");
    specs.push_back(cats_[i]->spec());
    glued.injections[i] = cells.front();
  }
  std::vector<SharedCell> shared;
  if (cats_.size() > 1) shared.push_back(glued);
  amalgam_ = Amalgam(std::move(specs), std::move(shared));
}

const ConcreteCategory& FreeRealization::category(std::size_t i) const {
  if (i >= cats_.size()) throw LookupError("no factor " + std::to_string(i + 1));
  return *cats_[i];
}

Object FreeRealization::letter_object(const Letter& l) const { return category(l.factor).object(l.irr); }

std::size_t FreeRealization::carrier_dim(const Word& w) const {
  std::size_t n = 1;
  for (const auto& l : w.letters) n *= category(l.factor).rep(l.irr).dim;
  return n;
}

std::pair<IrrId, Word> FreeRealization::split_left(std::size_t i, const Word& w) const {
  if (!w.empty() && w.letters.front().factor == i) return {w.letters.front().irr, tail(amalgam_, w)};
  return {cats_[i]->unit(), w};
}

std::pair<Word, IrrId> FreeRealization::split_right(std::size_t i, const Word& w) const {
  if (!w.empty() && w.letters.back().factor == i) {
    Word init = w;
    init.letters.pop_back();
    init.target = init.empty() ? init.source : amalgam_.letter_target(init.letters.back());
    return {init, w.letters.back().irr};
  }
  return {w, cats_[i]->unit()};
}

// ---------------------------------------------------------------------------
// Actions

ActionResult FreeRealization::act_left(std::size_t i, const Object& alpha0, const GradedSpace& h) const {
  const auto& cat = category(i);
  const Object alpha = cat.normalize(alpha0);
  std::map<Word, std::map<IrrId, Word>> by_rest;
  for (const auto& [s, dim] : h.dims) {
    auto [gamma, rest] = split_left(i, s);
    by_rest[rest].emplace(gamma, s);
  }
  ActionResult out{GradedSpace{h.source, h.target, {}}, {}};
  for (const auto& [rest, sources] : by_rest) {
    for (const auto& pi : cat.irreducibles()) {
      std::vector<Block> blocks;
      std::size_t offset = 0;
      for (const auto& gamma : cat.irreducibles()) {
        const auto it = sources.find(gamma);
        if (it == sources.end()) continue;
        const auto mult = cat.basis(join(alpha, {gamma}), pi).size();
        if (mult == 0) continue;
        const auto sd = h.dim(it->second);
        blocks.push_back(Block{gamma, it->second, offset, mult, sd});
        offset += mult * sd;
      }
      if (offset == 0) continue;
      const Word u = left_cons(amalgam_, i, pi, rest);
      out.space.dims[u] = offset;
      out.layout[u] = std::move(blocks);
    }
  }
  return out;
}

ActionResult FreeRealization::act_right(std::size_t i, const GradedSpace& h, const Object& alpha0) const {
  const auto& cat = category(i);
  const Object alpha = cat.normalize(alpha0);
  std::map<Word, std::map<IrrId, Word>> by_rest;
  for (const auto& [s, dim] : h.dims) {
    auto [rest, gamma] = split_right(i, s);
    by_rest[rest].emplace(gamma, s);
  }
  ActionResult out{GradedSpace{h.source, h.target, {}}, {}};
  for (const auto& [rest, sources] : by_rest) {
    for (const auto& pi : cat.irreducibles()) {
      std::vector<Block> blocks;
      std::size_t offset = 0;
      for (const auto& gamma : cat.irreducibles()) {
        const auto it = sources.find(gamma);
        if (it == sources.end()) continue;
        const auto mult = cat.basis(join({gamma}, alpha), pi).size();
        if (mult == 0) continue;
        const auto sd = h.dim(it->second);
        blocks.push_back(Block{gamma, it->second, offset, mult, sd});
        offset += mult * sd;
      }
      if (offset == 0) continue;
      const Word u = right_cons(amalgam_, rest, i, pi);
      out.space.dims[u] = offset;
      out.layout[u] = std::move(blocks);
    }
  }
  return out;
}

GradedMap FreeRealization::left_map(std::size_t i, const Object& a0, const Object& b0, const Matrix& phi,
                                    const GradedMap& t) const {
  const auto& cat = category(i);
  const Object a = cat.normalize(a0);
  const Object b = cat.normalize(b0);
  if (static_cast<std::size_t>(phi.rows()) != cat.carrier_dim(b) ||
      static_cast<std::size_t>(phi.cols()) != cat.carrier_dim(a)) {
    throw LayoutError("left_map: 2-cell has the wrong shape");
  }
  const auto src = act_left(i, a, t.domain);
  const auto dst = act_left(i, b, t.codomain);
  GradedMap out{src.space, dst.space, {}};
  for (const auto& [u, blocks] : src.layout) {
    if (dst.space.dim(u) == 0) continue;
    const IrrId pi = split_left(i, u).first;
    Matrix m = Matrix::Zero(dst.space.dim(u), src.space.dim(u));
    for (const auto& ba : blocks) {
      const Block* bb = find_block(dst, u, ba.gamma);
      if (bb == nullptr) continue;
      const auto& va = cat.basis(join(a, {ba.gamma}), pi);
      const auto& vb = cat.basis(join(b, {ba.gamma}), pi);
      const Matrix lift = kron(phi, identity(cat.rep(ba.gamma).dim));
      Matrix c(vb.size(), va.size());
      for (std::size_t k2 = 0; k2 < vb.size(); ++k2) {
        for (std::size_t k = 0; k < va.size(); ++k) c(k2, k) = pairing(vb[k2], lift * va[k]);
      }
      m.block(bb->offset, ba.offset, bb->mult * bb->source_dim, ba.mult * ba.source_dim) =
          kron(c, t.block(ba.source));
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::right_map(std::size_t i, const GradedMap& t, const Object& a0, const Object& b0,
                                     const Matrix& phi) const {
  const auto& cat = category(i);
  const Object a = cat.normalize(a0);
  const Object b = cat.normalize(b0);
  if (static_cast<std::size_t>(phi.rows()) != cat.carrier_dim(b) ||
      static_cast<std::size_t>(phi.cols()) != cat.carrier_dim(a)) {
    throw LayoutError("right_map: 2-cell has the wrong shape");
  }
  const auto src = act_right(i, t.domain, a);
  const auto dst = act_right(i, t.codomain, b);
  GradedMap out{src.space, dst.space, {}};
  for (const auto& [u, blocks] : src.layout) {
    if (dst.space.dim(u) == 0) continue;
    const IrrId pi = split_right(i, u).second;
    Matrix m = Matrix::Zero(dst.space.dim(u), src.space.dim(u));
    for (const auto& ba : blocks) {
      const Block* bb = find_block(dst, u, ba.gamma);
      if (bb == nullptr) continue;
      const auto& va = cat.basis(join({ba.gamma}, a), pi);
      const auto& vb = cat.basis(join({ba.gamma}, b), pi);
      const Matrix lift = kron(identity(cat.rep(ba.gamma).dim), phi);
      Matrix c(vb.size(), va.size());
      for (std::size_t k2 = 0; k2 < vb.size(); ++k2) {
        for (std::size_t k = 0; k < va.size(); ++k) c(k2, k) = pairing(vb[k2], lift * va[k]);
      }
      m.block(bb->offset, ba.offset, bb->mult * bb->source_dim, ba.mult * ba.source_dim) =
          kron(t.block(ba.source), c);
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::left_id(std::size_t i, const Object& a, const GradedMap& t) const {
  return left_map(i, a, a, identity(category(i).carrier_dim(category(i).normalize(a))), t);
}

GradedMap FreeRealization::right_id(std::size_t i, const GradedMap& t, const Object& a) const {
  return right_map(i, t, a, a, identity(category(i).carrier_dim(category(i).normalize(a))));
}

// ---------------------------------------------------------------------------
// Structure maps

GradedMap FreeRealization::assoc_left(std::size_t i, const Object& alpha0, const Object& beta0,
                                      const GradedSpace& h) const {
  const auto& cat = category(i);
  const Object alpha = cat.normalize(alpha0);
  const Object beta = cat.normalize(beta0);
  const Object ab = join(alpha, beta);
  const auto inner = act_left(i, beta, h);
  const auto dom = act_left(i, alpha, inner.space);
  const auto cod = act_left(i, ab, h);
  const Matrix id_alpha = identity(cat.carrier_dim(alpha));
  GradedMap out{dom.space, cod.space, {}};
  for (const auto& [u, blocks] : dom.layout) {
    const IrrId pi = split_left(i, u).first;
    Matrix m = Matrix::Zero(cod.space.dim(u), dom.space.dim(u));
    for (const auto& b1 : blocks) {
      const auto& vs = cat.basis(join(alpha, {b1.gamma}), pi);
      const double scale = mutations_.drop_assoc_scalar ? 1.0 : std::sqrt(d(i, b1.gamma));
      for (const auto& b2 : inner.layout.at(b1.source)) {
        const Block* cb = find_block(cod, u, b2.gamma);
        if (cb == nullptr) continue;
        const auto& ws = cat.basis(join(beta, {b2.gamma}), b1.gamma);
        const auto& bs = cat.basis(join(ab, {b2.gamma}), pi);
        for (std::size_t k = 0; k < vs.size(); ++k) {
          for (std::size_t mi = 0; mi < ws.size(); ++mi) {
            const Matrix x = kron(id_alpha, ws[mi]) * vs[k];
            for (std::size_t n = 0; n < bs.size(); ++n) {
              const Complex c = scale * pairing(bs[n], x);
              if (std::abs(c) == 0.0) continue;
              for (std::size_t hh = 0; hh < b2.source_dim; ++hh) {
                m(cb->offset + n * cb->source_dim + hh,
                  b1.offset + k * b1.source_dim + b2.offset + mi * b2.source_dim + hh) += c;
              }
            }
          }
        }
      }
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::assoc_right(std::size_t i, const GradedSpace& h, const Object& alpha0,
                                       const Object& beta0) const {
  const auto& cat = category(i);
  const Object alpha = cat.normalize(alpha0);
  const Object beta = cat.normalize(beta0);
  const Object ab = join(alpha, beta);
  const auto inner = act_right(i, h, alpha);
  const auto dom = act_right(i, inner.space, beta);
  const auto cod = act_right(i, h, ab);
  const Matrix id_beta = identity(cat.carrier_dim(beta));
  GradedMap out{dom.space, cod.space, {}};
  for (const auto& [u, blocks] : dom.layout) {
    const IrrId pi = split_right(i, u).second;
    Matrix m = Matrix::Zero(cod.space.dim(u), dom.space.dim(u));
    for (const auto& b1 : blocks) {
      const auto& vs = cat.basis(join({b1.gamma}, beta), pi);
      const double scale = std::sqrt(d(i, b1.gamma));
      for (const auto& b2 : inner.layout.at(b1.source)) {
        const Block* cb = find_block(cod, u, b2.gamma);
        if (cb == nullptr) continue;
        const auto& ws = cat.basis(join({b2.gamma}, alpha), b1.gamma);
        const auto& bs = cat.basis(join({b2.gamma}, ab), pi);
        for (std::size_t k = 0; k < vs.size(); ++k) {
          for (std::size_t mi = 0; mi < ws.size(); ++mi) {
            const Matrix x = kron(ws[mi], id_beta) * vs[k];
            for (std::size_t n = 0; n < bs.size(); ++n) {
              const Complex c = scale * pairing(bs[n], x);
              if (std::abs(c) == 0.0) continue;
              for (std::size_t hh = 0; hh < b2.source_dim; ++hh) {
                m(cb->offset + hh * cb->mult + n, b1.offset + (b2.offset + hh * b2.mult + mi) * b1.mult + k) += c;
              }
            }
          }
        }
      }
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::unitor_left(std::size_t i, const GradedSpace& h) const {
  const auto& cat = category(i);
  const auto dom = act_left(i, {}, h);
  GradedMap out{dom.space, h, {}};
  for (const auto& [u, blocks] : dom.layout) {
    const IrrId pi = split_left(i, u).first;
    Matrix m = Matrix::Zero(h.dim(u), dom.space.dim(u));
    for (const auto& b : blocks) {
      if (b.source != u) throw LayoutError("unit action moved a grade");
      const Complex c = cat.basis({b.gamma}, pi).front().trace() / std::sqrt(d(i, pi));
      for (std::size_t hh = 0; hh < b.source_dim; ++hh) m(hh, b.offset + hh) = c;
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::unitor_right(std::size_t i, const GradedSpace& h) const {
  const auto& cat = category(i);
  const auto dom = act_right(i, h, {});
  GradedMap out{dom.space, h, {}};
  for (const auto& [u, blocks] : dom.layout) {
    const IrrId pi = split_right(i, u).second;
    Matrix m = Matrix::Zero(h.dim(u), dom.space.dim(u));
    for (const auto& b : blocks) {
      if (b.source != u) throw LayoutError("unit action moved a grade");
      const Complex c = cat.basis({b.gamma}, pi).front().trace() / std::sqrt(d(i, pi));
      for (std::size_t hh = 0; hh < b.source_dim; ++hh) m(hh, b.offset + hh) = c;
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::sigma(std::size_t i, const Object& alpha0, const GradedSpace& h, std::size_t j,
                                 const Object& beta0) const {
  const auto& ci = category(i);
  const auto& cj = category(j);
  const Object alpha = ci.normalize(alpha0);
  const Object beta = cj.normalize(beta0);
  const auto left = act_left(i, alpha, h);
  const auto dom = act_right(j, left.space, beta);
  const auto right = act_right(j, h, beta);
  const auto cod = act_left(i, alpha, right.space);
  const Matrix id_alpha = identity(ci.carrier_dim(alpha));
  const Matrix id_beta = identity(cj.carrier_dim(beta));

  GradedMap out{dom.space, cod.space, {}};
  for (const auto& [u, rblocks] : dom.layout) {
    Matrix m = Matrix::Zero(cod.space.dim(u), dom.space.dim(u));
    const IrrId pi = split_left(i, u).first;
    for (const auto& rb : rblocks) {
      const Word& s = rb.source;
      const bool edge = i == j && (s.empty() || (s.size() == 1 && s.letters.front().factor == i));
      for (const auto& lb : left.layout.at(s)) {
        auto col = [&](std::size_t k, std::size_t hh, std::size_t k2) {
          return rb.offset + (lb.offset + k * lb.source_dim + hh) * rb.mult + k2;
        };
        if (!edge) {
          const Block* cb = find_block(cod, u, lb.gamma);
          const Block* rb2 = cb == nullptr ? nullptr : find_block(right, cb->source, rb.gamma, lb.source);
          if (rb2 == nullptr || cb->mult != lb.mult || rb2->mult != rb.mult) {
            throw LayoutError("swap: no matching summand for " + to_string(amalgam_, lb.source));
          }
          for (std::size_t k = 0; k < lb.mult; ++k) {
            for (std::size_t hh = 0; hh < lb.source_dim; ++hh) {
              for (std::size_t k2 = 0; k2 < rb.mult; ++k2) {
                m(cb->offset + k * cb->source_dim + rb2->offset + hh * rb2->mult + k2, col(k, hh, k2)) = 1.0;
              }
            }
          }
          continue;
        }
        const IrrId& gamma = lb.gamma;
        const IrrId& gamma2 = rb.gamma;
        const auto& vs = ci.basis(join(alpha, {gamma}), gamma2);
        const auto& v2s = ci.basis(join({gamma2}, beta), pi);
        const double outer = mutations_.drop_sigma_outer ? 1.0 : std::sqrt(d(i, gamma2));
        for (const auto& sig : ci.irreducibles()) {
          const auto& ws = ci.basis(join({gamma}, beta), sig);
          if (ws.empty()) continue;
          const Block* cb = find_block(cod, u, sig);
          if (cb == nullptr) continue;
          const Block* rb2 = find_block(right, cb->source, gamma, lb.source);
          if (rb2 == nullptr) throw LayoutError("swap: no matching summand at the empty grade");
          const auto& bs = ci.basis(join(alpha, {sig}), pi);
          const double scale = outer * (mutations_.drop_sigma_inner ? 1.0 : std::sqrt(d(i, sig)));
          for (std::size_t k = 0; k < vs.size(); ++k) {
            const Matrix vk = kron(vs[k], id_beta);
            for (std::size_t k2 = 0; k2 < v2s.size(); ++k2) {
              const Matrix x = vk * v2s[k2];
              for (std::size_t mi = 0; mi < ws.size(); ++mi) {
                const Matrix y = kron(id_alpha, ws[mi].adjoint()) * x;
                for (std::size_t n = 0; n < bs.size(); ++n) {
                  const Complex c = scale * pairing(bs[n], y);
                  if (std::abs(c) == 0.0) continue;
                  for (std::size_t hh = 0; hh < lb.source_dim; ++hh) {
                    m(cb->offset + n * cb->source_dim + rb2->offset + hh * rb2->mult + mi, col(k, hh, k2)) += c;
                  }
                }
              }
            }
          }
        }
      }
    }
    out.blocks[u] = std::move(m);
  }
  return out;
}

GradedMap FreeRealization::t_map(std::size_t i, const Object& alpha) const {
  const auto dom = act_right(i, star(), alpha).space;
  const auto cod = act_left(i, alpha, star()).space;
  if (!(dom == cod)) throw LayoutError("t_map: the two one-letter actions on the vacuum differ");
  return identity_map(dom);
}

// ---------------------------------------------------------------------------
// Word functors

std::vector<ActionResult> FreeRealization::word_stages(const Word& v, const GradedSpace& h) const {
  std::vector<ActionResult> stages(v.size());
  GradedSpace cur = h;
  for (std::size_t m = v.size(); m-- > 0;) {
    const auto& l = v.letters[m];
    stages[m] = act_left(l.factor, letter_object(l), cur);
    cur = stages[m].space;
  }
  return stages;
}

const std::vector<ActionResult>& FreeRealization::star_stages(const Word& v) const {
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->stages.find(v);
    if (it != cache_->stages.end()) return it->second;
  }
  auto stages = word_stages(v, star());
  std::lock_guard lock(cache_->mutex);
  return cache_->stages.emplace(v, std::move(stages)).first->second;
}

GradedSpace FreeRealization::word_space(const Word& v, const GradedSpace& h) const {
  GradedSpace cur = h;
  for (std::size_t m = v.size(); m-- > 0;) {
    const auto& l = v.letters[m];
    cur = act_left(l.factor, letter_object(l), cur).space;
  }
  return cur;
}

GradedMap FreeRealization::word_map(const Word& v, const GradedMap& t) const {
  GradedMap cur = t;
  for (std::size_t m = v.size(); m-- > 0;) {
    const auto& l = v.letters[m];
    cur = left_id(l.factor, letter_object(l), cur);
  }
  return cur;
}

GradedMap FreeRealization::word_swap(const Word& v, const GradedSpace& h, std::size_t j, const Object& beta0) const {
  const Object beta = category(j).normalize(beta0);
  Cache::SwapKey key{v, h.dims, j, beta};
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->swaps.find(key);
    if (it != cache_->swaps.end()) return it->second;
  }
  const auto stages = word_stages(v, h);
  GradedMap c = identity_map(act_right(j, h, beta).space);
  for (std::size_t m = v.size(); m-- > 0;) {
    const auto& l = v.letters[m];
    const Object a = letter_object(l);
    const GradedSpace& inner = m + 1 < v.size() ? stages[m + 1].space : h;
    c = compose(left_id(l.factor, a, c), sigma(l.factor, a, inner, j, beta));
  }
  std::lock_guard lock(cache_->mutex);
  return cache_->swaps.emplace(std::move(key), std::move(c)).first->second;
}

GradedMap FreeRealization::sigma_tilde(const Word& u, std::size_t i, const IrrId& alpha) const {
  const Object a = category(i).object(alpha);
  return compose(word_map(u, t_map(i, a)), word_swap(u, star(), i, a));
}

GradedSpace FreeRealization::star_right(const Word& w) const {
  GradedSpace cur = star();
  for (const auto& l : w.letters) cur = act_right(l.factor, cur, letter_object(l)).space;
  return cur;
}

// ---------------------------------------------------------------------------
// 2-cells

GradedMap FreeRealization::extend(const Word& v, const Word& v2, const GradedMap& eta_star,
                                  const GradedSpace& h) const {
  if (!(eta_star.domain == word_space(v, star())) || !(eta_star.codomain == word_space(v2, star()))) {
    throw LayoutError("extend: the vacuum component does not map L_v * to L_v2 *");
  }
  std::map<Word, GradedMap> memo;
  std::function<const GradedMap&(const Word&)> unroll = [&](const Word& w) -> const GradedMap& {
    if (w.empty()) return eta_star;
    const auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    const auto& last = w.letters.back();
    const auto [init, pi] = split_right(last.factor, w);
    const GradedSpace x = star_right(init);
    const GradedMap& prev = unroll(init);
    const Object p = letter_object(last);
    const GradedMap moved = right_id(last.factor, prev, p);
    const GradedMap c = word_swap(v, x, last.factor, p);
    const GradedMap c2 = word_swap(v2, x, last.factor, p);
    return memo.emplace(w, compose(c2, compose(moved, adjoint(c)))).first->second;
  };

  GradedMap out = zero_map(word_space(v, h), word_space(v2, h));
  for (const auto& [w, dim] : h.dims) {
    const GradedSpace x = star_right(w);
    if (x.dims.size() != 1 || x.dim(w) != 1) throw LayoutError("extend: * < w is not a line at w");
    const GradedMap& ew = unroll(w);
    for (std::size_t hh = 0; hh < dim; ++hh) {
      GradedMap u{x, h, {}};
      Matrix col = Matrix::Zero(dim, 1);
      col(hh, 0) = 1.0;
      u.blocks[w] = col;
      out = add(out, compose(word_map(v2, u), compose(ew, adjoint(word_map(v, u)))));
    }
  }
  return out;
}

namespace {

struct NaturalityCheck {
  GradedSpace x;
  GradedSpace xb;
  std::size_t j;
  Object beta;
  GradedMap c;
  GradedMap c2;
};

}  // namespace

static std::vector<NaturalityCheck> naturality_checks(const FreeRealization& r, const Word& v, const Word& v2,
                                                      std::size_t depth) {
  std::vector<NaturalityCheck> checks;
  const auto& am = r.amalgam();
  const std::size_t len = depth == 0 ? 0 : depth - 1;
  for (const auto& w : enumerate_reduced(am, r.cell(), r.cell(), len, kUnbounded)) {
    const GradedSpace x = r.star_right(w);
    for (std::size_t j = 0; j < r.size(); ++j) {
      for (const auto& irr : am.letters_from(j, r.cell(), kUnbounded)) {
        const Object beta = r.category(j).object(irr);
        checks.push_back(NaturalityCheck{x, r.act_right(j, x, beta).space, j, beta, r.word_swap(v, x, j, beta),
                                         r.word_swap(v2, x, j, beta)});
      }
    }
  }
  return checks;
}

static std::vector<GradedMap> naturality_defects(const FreeRealization& r, const Word& v, const Word& v2,
                                                 const GradedMap& eta_star,
                                                 const std::vector<NaturalityCheck>& checks) {
  std::vector<GradedMap> out;
  std::map<std::map<Word, std::size_t>, GradedMap> memo;
  auto component = [&](const GradedSpace& x) -> const GradedMap& {
    auto it = memo.find(x.dims);
    if (it == memo.end()) it = memo.emplace(x.dims, r.extend(v, v2, eta_star, x)).first;
    return it->second;
  };
  for (const auto& ch : checks) {
    const GradedMap lhs = compose(ch.c2, r.right_id(ch.j, component(ch.x), ch.beta));
    const GradedMap rhs = compose(component(ch.xb), ch.c);
    out.push_back(add(lhs, scale(rhs, -1.0)));
  }
  return out;
}

double FreeRealization::naturality_residual(const Word& v, const Word& v2, const GradedMap& eta_star,
                                            std::size_t depth) const {
  double worst = 0.0;
  for (const auto& m : naturality_defects(*this, v, v2, eta_star, naturality_checks(*this, v, v2, depth))) {
    worst = std::max(worst, max_abs(m));
  }
  return worst;
}

GradedMap FreeRealization::extend_checked(const Word& v, const Word& v2, const GradedMap& eta_star,
                                          const GradedSpace& h, std::size_t depth, double tolerance) const {
  const double defect = naturality_residual(v, v2, eta_star, depth);
  if (!(defect <= tolerance)) {
    throw NotExtendableError("vacuum component fails naturality by " + std::to_string(defect) + " within depth " +
                             std::to_string(depth));
  }
  return extend(v, v2, eta_star, h);
}

std::vector<GradedMap> FreeRealization::extendable_basis(const Word& v, const Word& v2, std::size_t depth) const {
  const GradedSpace s1 = word_space(v, star());
  const GradedSpace s2 = word_space(v2, star());
  const auto checks = naturality_checks(*this, v, v2, depth);
  std::vector<GradedMap> units;
  std::vector<std::vector<Complex>> columns;
  for (const auto& [w, d1] : s1.dims) {
    const auto d2 = s2.dim(w);
    for (std::size_t p = 0; p < d2; ++p) {
      for (std::size_t q = 0; q < d1; ++q) {
        GradedMap e = zero_map(s1, s2);
        Matrix b = Matrix::Zero(d2, d1);
        b(p, q) = 1.0;
        e.blocks[w] = b;
        std::vector<Complex> entries;
        for (const auto& m : naturality_defects(*this, v, v2, e, checks)) {
          for (const auto& [g, blk] : m.blocks) {
            for (Eigen::Index r = 0; r < blk.rows(); ++r) {
              for (Eigen::Index c = 0; c < blk.cols(); ++c) entries.push_back(blk(r, c));
            }
          }
        }
        units.push_back(std::move(e));
        columns.push_back(std::move(entries));
      }
    }
  }
  if (units.empty()) return {};
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  const auto n = static_cast<Eigen::Index>(units.size());
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(rows, 1)), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& c = columns[static_cast<std::size_t>(k)];
    for (std::size_t r = 0; r < c.size(); ++r) a(static_cast<Eigen::Index>(r), k) = c[r];
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) rank += svd.singularValues()(k) > 1e-8;
  std::vector<GradedMap> out;
  for (Eigen::Index col = rank; col < n; ++col) {
    GradedMap e = zero_map(s1, s2);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex c = svd.matrixV()(k, col);
      if (std::abs(c) > 0.0) e = add(e, scale(units[static_cast<std::size_t>(k)], c));
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::size_t FreeRealization::extendable_dim(const Word& v, const Word& v2, std::size_t depth) const {
  return extendable_basis(v, v2, depth).size();
}

// ---------------------------------------------------------------------------
// Assembly

Matrix FreeRealization::assembly_basis(const Word& v, const Word& w, std::size_t e) const {
  auto key = std::make_tuple(v, w, e);
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->assembly.find(key);
    if (it != cache_->assembly.end()) return it->second;
  }
  Matrix out;
  if (v.empty()) {
    if (!w.empty() || e != 0) throw LayoutError("assembly: the vacuum lives at the empty word only");
    out = Matrix::Identity(1, 1);
  } else {
    const auto& stages = star_stages(v);
    const auto it = stages.front().layout.find(w);
    if (it == stages.front().layout.end()) throw LayoutError("assembly: " + to_string(amalgam_, w) + " not graded");
    const Block* blk = nullptr;
    for (const auto& b : it->second) {
      if (e >= b.offset && e < b.offset + b.mult * b.source_dim) blk = &b;
    }
    if (blk == nullptr) throw LayoutError("assembly: basis index out of range");
    const auto k = (e - blk->offset) / blk->source_dim;
    const auto hh = (e - blk->offset) % blk->source_dim;
    const auto& l = v.letters.front();
    const auto& cat = category(l.factor);
    const Object a = letter_object(l);
    const auto [pi, rest] = split_left(l.factor, w);
    const Matrix& vk = cat.basis(join(a, {blk->gamma}), pi).at(k);
    const Matrix inner = assembly_basis(tail(amalgam_, v), blk->source, hh);
    out = std::sqrt(d(l.factor, blk->gamma)) * kron(identity(cat.carrier_dim(a)), inner) *
          kron(vk, identity(carrier_dim(rest)));
  }
  std::lock_guard lock(cache_->mutex);
  return cache_->assembly.emplace(std::move(key), std::move(out)).first->second;
}

Matrix FreeRealization::assembly(const Word& v, const Word& w, const Vector& zeta) const {
  Matrix out = Matrix::Zero(carrier_dim(v), carrier_dim(w));
  for (Eigen::Index e = 0; e < zeta.size(); ++e) {
    if (zeta(e) != Complex(0.0)) out += zeta(e) * assembly_basis(v, w, static_cast<std::size_t>(e));
  }
  return out;
}

Matrix FreeRealization::universal(const Word& v, const Word& v2, const GradedMap& eta_star) const {
  const GradedSpace s1 = word_space(v, star());
  if (!(eta_star.domain == s1) || !(eta_star.codomain == word_space(v2, star()))) {
    throw LayoutError("universal: the vacuum component does not map L_v * to L_v2 *");
  }
  Matrix out = Matrix::Zero(carrier_dim(v2), carrier_dim(v));
  for (const auto& [w, dim] : s1.dims) {
    if (eta_star.codomain.dim(w) == 0) continue;
    double weight = 1.0;
    if (!mutations_.drop_universal_weight) {
      for (const auto& l : w.letters) weight *= d(l.factor, l.irr);
    }
    const Matrix block = eta_star.block(w);
    for (std::size_t e = 0; e < dim; ++e) {
      out += weight * assembly(v2, w, block.col(e)) * assembly_basis(v, w, e).adjoint();
    }
  }
  return out;
}

}  // namespace freeprod
