#include "freeprod/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "freeprod/free_fusion.hpp"

namespace freeprod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mat_dev(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return kInf;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

Matrix eye(std::size_t n) { return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)); }

Object join(const Object& a, const Object& b) {
  Object out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

class Tally {
 public:
  Tally(std::string identity, std::string tag, double tolerance)
      : identity_(std::move(identity)), tag_(std::move(tag)), tolerance_(tolerance) {}

  void add(double deviation, const std::function<std::string()>& where) {
    ++count_;
    if (std::isnan(deviation)) deviation = kInf;
    if (count_ == 1 || deviation > worst_) {
      worst_ = deviation;
      where_ = where();
    }
  }

  /// Runs one instance; a thrown error counts as an infinite deviation.
  void run(const std::function<std::string()>& where, const std::function<double()>& fn) {
    double dev = 0.0;
    std::string note;
    try {
      dev = fn();
    } catch (const std::exception& e) {
      dev = kInf;
      note = std::string(" (") + e.what() + ")";
    }
    add(dev, [&] { return where() + note; });
  }

  CheckResult result() const {
    CheckResult out;
    out.identity = identity_;
    out.tag = tag_;
    out.tolerance = tolerance_;
    out.max_deviation = worst_;
    if (count_ == 0) {
      out.instance = "0 instances";
      out.pass = true;
    } else {
      out.instance = std::to_string(count_) + (count_ == 1 ? " instance" : " instances") + "; worst at " + where_;
      out.pass = worst_ <= tolerance_;
    }
    return out;
  }

 private:
  std::string identity_;
  std::string tag_;
  double tolerance_;
  std::size_t count_ = 0;
  double worst_ = 0.0;
  std::string where_;
};

struct LetterRef {
  std::size_t factor;
  IrrId irr;
};

class Suite {
 public:
  Suite(const FreeRealization& r, const VerifyOptions& options)
      : r_(r), am_(r.amalgam()), options_(options), rng_(options.seed) {
    const std::size_t depth = std::max<std::size_t>(options.depth, 1);
    depth_ = depth;
    object_words_ = enumerate_general(am_, r.cell(), r.cell(), depth - 1, kUnbounded);
    for (const auto& u : object_words_) objects_.push_back(r.word_space(u, r.star()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (const auto& irr : r.category(i).irreducibles()) letters_.push_back({i, irr});
    }
    // Word functors: one or more non-unit letters, or a single unit letter.
    functor_words_ = enumerate_general(am_, r.cell(), r.cell(), depth - 1, kUnbounded);
    functor_words_.erase(functor_words_.begin());
    for (std::size_t i = 0; i < r.size(); ++i) {
      functor_words_.push_back(single_letter(am_, i, r.category(i).unit()));
    }
  }

  double tol(double fallback) const { return options_.tolerance.value_or(fallback); }

  void run(CheckGroup g, std::vector<CheckResult>& out) {
    switch (g) {
      case CheckGroup::factors: return factors(out);
      case CheckGroup::unitarity: return unitarity(out);
      case CheckGroup::coherence: return coherence(out);
      case CheckGroup::grading: return grading(out);
      case CheckGroup::extension: return extension(out);
      case CheckGroup::assembly: return assembly(out);
      case CheckGroup::functor: return functor(out);
    }
  }

 private:
  // Descriptions ------------------------------------------------------------

  std::string lbl(std::size_t i, const IrrId& irr) const { return irr + "@" + std::to_string(i + 1); }
  std::string word(const Word& w) const { return to_string(am_, w); }
  std::string obj(std::size_t k) const { return object_words_[k].empty() ? "*" : word(object_words_[k]) + ">*"; }

  Object o(std::size_t i, const IrrId& irr) const { return r_.category(i).object(irr); }

  // Sampled 2-cells ---------------------------------------------------------

  const std::vector<GradedMap>& hom_basis(const Word& v, const Word& v2) {
    const auto key = std::make_pair(v, v2);
    auto it = bases_.find(key);
    if (it == bases_.end()) it = bases_.emplace(key, r_.extendable_basis(v, v2, depth_)).first;
    return it->second;
  }

  GradedMap sample(const Word& v, const Word& v2) {
    const auto& basis = hom_basis(v, v2);
    std::normal_distribution<double> n(0.0, 1.0);
    GradedMap out = zero_map(r_.word_space(v, r_.star()), r_.word_space(v2, r_.star()));
    for (const auto& b : basis) out = add(out, scale(b, Complex(n(rng_), n(rng_))));
    return out;
  }

  /// Pairs of test words with a nonzero space of 2-cells between them.
  const std::vector<std::pair<Word, Word>>& sampled_pairs() {
    if (!pairs_ready_) {
      for (const auto& v : object_words_) {
        for (const auto& v2 : object_words_) {
          if (hom_dim_words(am_, v, v2) > 0) pairs_.emplace_back(v, v2);
        }
      }
      pairs_ready_ = true;
    }
    return pairs_;
  }

  // Factor categories -------------------------------------------------------

  void factors(std::vector<CheckResult>& out) {
    Tally conj("conjugate equations", "conjugate-equations", tol(kExactTolerance));
    Tally stand("standard solutions", "standard-solutions", tol(kExactTolerance));
    Tally compl_("matrix unit completeness", "matrix-unit-completeness", tol(kExactTolerance));
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < r_.size(); ++i) {
      const auto& cat = r_.category(i);
      for (const auto& a : cat.irreducibles()) {
        const auto d = cat.rep(a).dim;
        const auto db = cat.rep(cat.dual(a)).dim;
        conj.run([&] { return lbl(i, a); }, [&] {
          const Matrix& s = cat.s(a);
          const Matrix& t = cat.t(a);
          const double e1 = mat_dev(kron(eye(d), t.adjoint()) * kron(s, eye(d)), eye(d));
          const double e2 = mat_dev(kron(eye(db), s.adjoint()) * kron(t, eye(db)), eye(db));
          return std::max(e1, e2);
        });
        Matrix tm(d, d);
        for (Eigen::Index p = 0; p < tm.rows(); ++p) {
          for (Eigen::Index q = 0; q < tm.cols(); ++q) tm(p, q) = Complex(n(rng_), n(rng_));
        }
        stand.run([&] { return lbl(i, a) + " sampled T"; }, [&] {
          const Matrix& s = cat.s(a);
          const Matrix& t = cat.t(a);
          const Complex left = (s.adjoint() * kron(tm, eye(db)) * s)(0, 0);
          const Complex right = (t.adjoint() * kron(eye(db), tm) * t)(0, 0);
          const double dd = std::abs((s.adjoint() * s)(0, 0) - cat.qdim(a));
          return std::max(std::abs(left - right), dd);
        });
        for (const auto& b : cat.irreducibles()) {
          compl_.run([&] { return lbl(i, a) + " (x) " + lbl(i, b); }, [&] {
            const Object ab = cat.normalize({a, b});
            const auto n_ab = cat.carrier_dim(ab);
            Matrix sum = Matrix::Zero(n_ab, n_ab);
            for (const auto& g : cat.irreducibles()) {
              for (const auto& v : cat.basis(ab, g)) sum += cat.qdim(g) * v * v.adjoint();
            }
            return mat_dev(sum, eye(n_ab));
          });
        }
      }
    }
    out.push_back(conj.result());
    out.push_back(stand.result());
    out.push_back(compl_.result());
  }

  // Unitarity ---------------------------------------------------------------

  void unitarity(std::vector<CheckResult>& out) {
    const double t = tol(kExactTolerance);
    Tally al("left associator unitary", "left-associator-unitary", t);
    Tally ar("right associator unitary", "right-associator-unitary", t);
    Tally ul("left unitor unitary", "left-unitor-unitary", t);
    Tally ur("right unitor unitary", "right-unitor-unitary", t);
    Tally sg("swap unitary, distinct factors", "swap-unitary-distinct", t);
    Tally se("swap unitary, same factor", "swap-unitary-same", t);
    Tally tf("vacuum flip unitary", "vacuum-flip-unitary", t);
    for (std::size_t k = 0; k < objects_.size(); ++k) {
      const auto& x = objects_[k];
      for (std::size_t i = 0; i < r_.size(); ++i) {
        ul.run([&] { return lbl(i, r_.category(i).unit()) + " on " + obj(k); },
               [&] { return unitarity_defect(r_.unitor_left(i, x)); });
        ur.run([&] { return obj(k) + " < " + lbl(i, r_.category(i).unit()); },
               [&] { return unitarity_defect(r_.unitor_right(i, x)); });
      }
      for (const auto& a : letters_) {
        for (const auto& b : letters_) {
          if (a.factor == b.factor) {
            const std::size_t i = a.factor;
            al.run([&] { return lbl(i, a.irr) + ", " + lbl(i, b.irr) + " on " + obj(k); },
                   [&] { return unitarity_defect(r_.assoc_left(i, o(i, a.irr), o(i, b.irr), x)); });
            ar.run([&] { return obj(k) + " < " + lbl(i, a.irr) + ", " + lbl(i, b.irr); },
                   [&] { return unitarity_defect(r_.assoc_right(i, x, o(i, a.irr), o(i, b.irr))); });
          }
          Tally& target = a.factor == b.factor ? se : sg;
          target.run([&] { return lbl(a.factor, a.irr) + " > " + obj(k) + " < " + lbl(b.factor, b.irr); }, [&] {
            return unitarity_defect(r_.sigma(a.factor, o(a.factor, a.irr), x, b.factor, o(b.factor, b.irr)));
          });
        }
      }
    }
    for (const auto& a : letters_) {
      tf.run([&] { return lbl(a.factor, a.irr); },
             [&] { return unitarity_defect(r_.t_map(a.factor, o(a.factor, a.irr))); });
    }
    for (auto* tl : {&al, &ar, &ul, &ur, &sg, &se, &tf}) out.push_back(tl->result());
  }

  // Coherence ---------------------------------------------------------------

  void coherence(std::vector<CheckResult>& out) {
    const double t = tol(kDiagramTolerance);
    Tally lp("left module associativity", "left-module-associativity", t);
    Tally lu("left module unit", "left-module-unit", t);
    Tally rp("right module associativity", "right-module-associativity", t);
    Tally ru("right module unit", "right-module-unit", t);
    Tally ca("commutant associativity", "commutant-associativity", t);
    Tally cu("commutant unit", "commutant-unit", t);
    Tally cm("commutant morphism square", "commutant-morphism-square", t);

    for (std::size_t k = 0; k < objects_.size(); ++k) {
      const auto& x = objects_[k];
      for (const auto& a : letters_) {
        const std::size_t i = a.factor;
        const Object oa = o(i, a.irr);
        lu.run([&] { return lbl(i, a.irr) + " on " + obj(k); }, [&] {
          const GradedMap lhs = r_.assoc_left(i, oa, {}, x);
          const GradedMap rhs = r_.left_id(i, oa, r_.unitor_left(i, x));
          return deviation(lhs, rhs);
        });
        ru.run([&] { return obj(k) + " < " + lbl(i, a.irr); }, [&] {
          const GradedMap lhs = r_.assoc_right(i, x, {}, oa);
          const GradedMap rhs = r_.right_id(i, r_.unitor_right(i, x), oa);
          return deviation(lhs, rhs);
        });
        for (const auto& b : letters_) {
          if (b.factor != i) continue;
          const Object ob = o(i, b.irr);
          for (const auto& c : letters_) {
            if (c.factor != i) continue;
            const Object oc = o(i, c.irr);
            lp.run([&] { return lbl(i, a.irr) + ", " + lbl(i, b.irr) + ", " + lbl(i, c.irr) + " on " + obj(k); },
                   [&] {
                     const GradedSpace cx = r_.act_left(i, oc, x).space;
                     const GradedMap lhs =
                         compose(r_.assoc_left(i, join(oa, ob), oc, x), r_.assoc_left(i, oa, ob, cx));
                     const GradedMap rhs =
                         compose(r_.assoc_left(i, oa, join(ob, oc), x), r_.left_id(i, oa, r_.assoc_left(i, ob, oc, x)));
                     return deviation(lhs, rhs);
                   });
            rp.run([&] { return obj(k) + " < " + lbl(i, a.irr) + ", " + lbl(i, b.irr) + ", " + lbl(i, c.irr); },
                   [&] {
                     const GradedSpace xa = r_.act_right(i, x, oa).space;
                     const GradedMap lhs =
                         compose(r_.assoc_right(i, x, oa, join(ob, oc)), r_.assoc_right(i, xa, ob, oc));
                     const GradedMap rhs = compose(r_.assoc_right(i, x, join(oa, ob), oc),
                                                   r_.right_id(i, r_.assoc_right(i, x, oa, ob), oc));
                     return deviation(lhs, rhs);
                   });
          }
        }
      }

      for (const auto& u : functor_words_) {
        const GradedSpace fx = r_.word_space(u, x);
        for (std::size_t j = 0; j < r_.size(); ++j) {
          cu.run([&] { return word(u) + " on " + obj(k) + " < " + lbl(j, r_.category(j).unit()); }, [&] {
            const GradedMap lhs = compose(r_.word_map(u, r_.unitor_right(j, x)), r_.word_swap(u, x, j, {}));
            return deviation(lhs, r_.unitor_right(j, fx));
          });
        }
        for (const auto& b1 : letters_) {
          for (const auto& b2 : letters_) {
            if (b1.factor != b2.factor) continue;
            const std::size_t j = b1.factor;
            const Object o1 = o(j, b1.irr);
            const Object o2 = o(j, b2.irr);
            ca.run([&] { return word(u) + " on " + obj(k) + " < " + lbl(j, b1.irr) + ", " + lbl(j, b2.irr); }, [&] {
              const GradedSpace x1 = r_.act_right(j, x, o1).space;
              const GradedMap lhs = compose(r_.word_map(u, r_.assoc_right(j, x, o1, o2)),
                                            compose(r_.word_swap(u, x1, j, o2),
                                                    r_.right_id(j, r_.word_swap(u, x, j, o1), o2)));
              const GradedMap rhs = compose(r_.word_swap(u, x, j, join(o1, o2)), r_.assoc_right(j, fx, o1, o2));
              return deviation(lhs, rhs);
            });
          }
        }
      }

      // The associator and unitor of a factor action as morphisms of
      // functors commuting with the right actions.
      for (const auto& a : letters_) {
        for (const auto& b : letters_) {
          if (a.factor != b.factor) continue;
          const std::size_t i = a.factor;
          const Object oa = o(i, a.irr);
          const Object ob = o(i, b.irr);
          const Word ab = make_word(am_, {Letter{i, a.irr}, Letter{i, b.irr}});
          for (const auto& g : letters_) {
            const std::size_t j = g.factor;
            const Object og = o(j, g.irr);
            cm.run([&] { return "associator " + lbl(i, a.irr) + ", " + lbl(i, b.irr) + " at " + obj(k) + " < " +
                                lbl(j, g.irr); },
                   [&] {
                     const GradedSpace xg = r_.act_right(j, x, og).space;
                     const GradedMap lhs = compose(r_.assoc_left(i, oa, ob, xg), r_.word_swap(ab, x, j, og));
                     const GradedMap rhs =
                         compose(r_.sigma(i, join(oa, ob), x, j, og), r_.right_id(j, r_.assoc_left(i, oa, ob, x), og));
                     return deviation(lhs, rhs);
                   });
          }
        }
      }
      for (std::size_t i = 0; i < r_.size(); ++i) {
        for (const auto& g : letters_) {
          const std::size_t j = g.factor;
          const Object og = o(j, g.irr);
          cm.run([&] { return "unitor " + lbl(i, r_.category(i).unit()) + " at " + obj(k) + " < " + lbl(j, g.irr); },
                 [&] {
                   const GradedSpace xg = r_.act_right(j, x, og).space;
                   const GradedMap lhs = compose(r_.unitor_left(i, xg), r_.sigma(i, {}, x, j, og));
                   const GradedMap rhs = r_.right_id(j, r_.unitor_left(i, x), og);
                   return deviation(lhs, rhs);
                 });
        }
      }
    }
    // Extensions of sampled vacuum components.
    for (const auto& [v, v2] : sampled_pairs()) {
      const GradedMap eta = sample(v, v2);
      cm.run([&] { return "extension " + word(v) + " -> " + word(v2); },
             [&] { return r_.naturality_residual(v, v2, eta, depth_); });
    }
    for (auto* tl : {&lp, &lu, &rp, &ru, &ca, &cu, &cm}) out.push_back(tl->result());
  }

  // Grading -----------------------------------------------------------------

  void grading(std::vector<CheckResult>& out) {
    Tally br("grading bridge", "grading-bridge", tol(0.0));
    Tally st("word action strictness", "word-action-strictness", tol(0.0));
    for (const auto& v : enumerate_general(am_, r_.cell(), r_.cell(), depth_ + 1, kUnbounded, true)) {
      br.run([&] { return word(v); }, [&] {
        const GradedSpace s = r_.word_space(v, r_.star());
        const FreeDecomposition dec = decompose_word(am_, v);
        double diff = 0.0;
        for (const auto& [w, d] : s.dims) diff += std::abs(static_cast<double>(d) - static_cast<double>(dec[w]));
        for (const auto& [w, m] : dec.terms) {
          if (s.dim(w) == 0) diff += static_cast<double>(m);
        }
        return diff;
      });
    }
    const auto words = enumerate_general(am_, r_.cell(), r_.cell(), depth_, kUnbounded, true);
    for (const auto& v : words) {
      for (const auto& w : words) {
        if (v.empty() || v.size() + w.size() > depth_) continue;
        st.run([&] { return word(v) + " . " + word(w); }, [&] {
          const GradedSpace inner = r_.word_space(w, r_.star());
          const auto whole = r_.word_stages(concat(v, w), r_.star());
          const auto outer = r_.word_stages(v, inner);
          if (!(whole.front().space == outer.front().space)) return 1.0;
          for (std::size_t m = 0; m < v.size(); ++m) {
            if (!(whole[m].space == outer[m].space) || whole[m].layout.size() != outer[m].layout.size()) return 1.0;
            for (const auto& [u, blocks] : whole[m].layout) {
              const auto it = outer[m].layout.find(u);
              if (it == outer[m].layout.end() || it->second.size() != blocks.size()) return 1.0;
              for (std::size_t b = 0; b < blocks.size(); ++b) {
                const auto& x = blocks[b];
                const auto& y = it->second[b];
                if (x.gamma != y.gamma || !(x.source == y.source) || x.offset != y.offset || x.mult != y.mult ||
                    x.source_dim != y.source_dim) {
                  return 1.0;
                }
              }
            }
          }
          return 0.0;
        });
      }
    }
    out.push_back(br.result());
    out.push_back(st.result());
  }

  // Extension ---------------------------------------------------------------

  void extension(std::vector<CheckResult>& out) {
    Tally rs("vacuum restriction", "vacuum-restriction", tol(kExactTolerance));
    Tally nb("vacuum norm bound", "vacuum-norm-bound", tol(kDiagramTolerance));
    Tally ed("extension dimension", "extension-dimension", tol(0.0));
    Tally ff("factor embedding fully faithful", "factor-embedding-fully-faithful", tol(kDiagramTolerance));

    for (const auto& [v, v2] : sampled_pairs()) {
      const GradedMap eta = sample(v, v2);
      rs.run([&] { return word(v) + " -> " + word(v2); },
             [&] { return deviation(r_.extend(v, v2, eta, r_.star()), eta); });
      const double top = operator_norm(eta);
      for (std::size_t k = 0; k < objects_.size(); ++k) {
        nb.run([&] { return word(v) + " -> " + word(v2) + " at " + obj(k); },
               [&] { return std::max(0.0, operator_norm(r_.extend(v, v2, eta, objects_[k])) - top); });
      }
    }
    for (const auto& v : object_words_) {
      for (const auto& v2 : object_words_) {
        ed.run([&] { return word(v) + " -> " + word(v2); }, [&] {
          const double a = static_cast<double>(hom_basis(v, v2).size());
          const double b = static_cast<double>(hom_dim_words(am_, v, v2));
          return std::abs(a - b);
        });
      }
    }
    for (std::size_t i = 0; i < r_.size(); ++i) {
      const auto& cat = r_.category(i);
      std::vector<Object> objs;
      for (const auto& a : cat.irreducibles()) {
        if (a != cat.unit()) objs.push_back({a});
      }
      const std::size_t singles = objs.size();
      for (std::size_t p = 0; p < singles; ++p) {
        for (std::size_t q = 0; q < singles; ++q) objs.push_back({objs[p][0], objs[q][0]});
      }
      for (const auto& x : objs) {
        for (const auto& y : objs) {
          ff.run([&] { return lbl(i, join_labels(x)) + " -> " + lbl(i, join_labels(y)); },
                 [&] { return embedding_defect(i, x, y); });
        }
      }
    }
    for (auto* tl : {&rs, &nb, &ed, &ff}) out.push_back(tl->result());
  }

  static std::string join_labels(const Object& x) {
    std::string s;
    for (const auto& l : x) s += (s.empty() ? "" : " ") + l;
    return "(" + s + ")";
  }

  Word letters_word(std::size_t i, const Object& x) const {
    std::vector<Letter> ls;
    for (const auto& l : x) ls.push_back(Letter{i, l});
    return make_word(am_, ls);
  }

  /// The vacuum component of the image of phi: x -> y under the factor
  /// embedding, for objects with one or two letters.
  GradedMap embed(std::size_t i, const Object& x, const Object& y, const Matrix& phi) const {
    const GradedSpace star = r_.star();
    GradedMap core = r_.left_map(i, x, y, phi, identity_map(star));
    if (x.size() == 2) core = compose(core, r_.assoc_left(i, {x[0]}, {x[1]}, star));
    if (y.size() == 2) core = compose(adjoint(r_.assoc_left(i, {y[0]}, {y[1]}, star)), core);
    return core;
  }

  double embedding_defect(std::size_t i, const Object& x, const Object& y) {
    const auto& cat = r_.category(i);
    std::vector<Matrix> gx, gy;
    for (std::size_t g = 0; g < cat.group().order; ++g) {
      gx.push_back(cat.rep_matrix(x, g));
      gy.push_back(cat.rep_matrix(y, g));
    }
    const auto phis = intertwiners(gy, gx);
    const Word vx = letters_word(i, x);
    const Word vy = letters_word(i, y);
    const std::size_t hom = cat.hom_dim(x, y);
    const std::size_t ext = hom_basis(vx, vy).size();
    double worst = 0.0;
    std::vector<std::vector<Complex>> flat;
    for (const auto& phi : phis) {
      const GradedMap e = embed(i, x, y, phi);
      worst = std::max(worst, r_.naturality_residual(vx, vy, e, depth_));
      std::vector<Complex> entries;
      for (const auto& [w, d] : e.domain.dims) {
        const Matrix b = e.block(w);
        for (Eigen::Index p = 0; p < b.rows(); ++p) {
          for (Eigen::Index q = 0; q < b.cols(); ++q) entries.push_back(b(p, q));
        }
      }
      flat.push_back(std::move(entries));
    }
    std::size_t rank = 0;
    if (!flat.empty() && !flat.front().empty()) {
      Matrix m(static_cast<Eigen::Index>(flat.front().size()), static_cast<Eigen::Index>(flat.size()));
      for (std::size_t c = 0; c < flat.size(); ++c) {
        for (std::size_t p = 0; p < flat[c].size(); ++p) m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = flat[c][p];
      }
      Eigen::JacobiSVD<Matrix> svd(m);
      for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) rank += svd.singularValues()(k) > 1e-8;
    }
    if (phis.size() != hom || ext != hom || rank != hom) return kInf;
    return worst;
  }

  // Assembly ----------------------------------------------------------------

  double word_dim(const Word& w) const {
    double d = 1.0;
    for (const auto& l : w.letters) d *= r_.category(l.factor).qdim(l.irr);
    return d;
  }

  void assembly(std::vector<CheckResult>& out) {
    const double t = tol(kExactTolerance);
    Tally orth("assembly orthogonality", "assembly-orthogonality", t);
    Tally li("assembly left identity", "assembly-left-identity", t);
    Tally ri("assembly right identity", "assembly-right-identity", t);
    Tally rv("assembly right version", "assembly-right-version", t);

    const GradedSpace star = r_.star();
    for (const auto& v : enumerate_general(am_, r_.cell(), r_.cell(), depth_, kUnbounded, true)) {
      orth.run([&] { return word(v); }, [&] {
        const GradedSpace s = r_.word_space(v, star);
        double worst = 0.0;
        for (const auto& [w, dw] : s.dims) {
          for (const auto& [w2, dw2] : s.dims) {
            for (std::size_t p = 0; p < dw; ++p) {
              for (std::size_t q = 0; q < dw2; ++q) {
                const Matrix m = r_.assembly_basis(v, w, p).adjoint() * r_.assembly_basis(v, w2, q);
                Matrix expect = Matrix::Zero(m.rows(), m.cols());
                if (w == w2 && p == q) expect = eye(r_.carrier_dim(w)) / word_dim(w);
                worst = std::max(worst, mat_dev(m, expect));
              }
            }
          }
        }
        return worst;
      });
    }

    for (const auto& v : object_words_) {
      for (const auto& v2 : object_words_) {
        for (const auto& a : letters_) {
          const std::size_t i = a.factor;
          li.run([&] { return lbl(i, a.irr) + " with " + word(v) + ", " + word(v2); },
                 [&] { return left_identity(i, a.irr, v, v2); });
          ri.run([&] { return word(v) + ", " + word(v2) + " with " + lbl(i, a.irr); },
                 [&] { return right_identity(i, a.irr, v, v2); });
        }
      }
      for (const auto& a : letters_) {
        rv.run([&] { return word(v) + " with " + lbl(a.factor, a.irr); },
               [&] { return right_version(a.factor, a.irr, v); });
      }
    }
    for (auto* tl : {&orth, &li, &ri, &rv}) out.push_back(tl->result());
  }

  static const Block* block_for(const ActionResult& a, const Word& u, const IrrId& gamma) {
    const auto it = a.layout.find(u);
    if (it == a.layout.end()) return nullptr;
    for (const auto& b : it->second) {
      if (b.gamma == gamma) return &b;
    }
    return nullptr;
  }

  std::pair<IrrId, Word> head(std::size_t i, const Word& w) const {
    if (!w.empty() && w.letters.front().factor == i) return {w.letters.front().irr, tail(am_, w)};
    return {r_.category(i).unit(), w};
  }

  std::pair<Word, IrrId> last(std::size_t i, const Word& w) const {
    if (!w.empty() && w.letters.back().factor == i) {
      Word init = w;
      init.letters.pop_back();
      init.target = init.empty() ? init.source : am_.letter_target(init.letters.back());
      return {init, w.letters.back().irr};
    }
    return {w, r_.category(i).unit()};
  }

  double left_identity(std::size_t i, const IrrId& alpha, const Word& v, const Word& v2) const {
    const auto& cat = r_.category(i);
    const GradedSpace star = r_.star();
    const Word av = concat(single_letter(am_, i, alpha), v);
    const Word av2 = concat(single_letter(am_, i, alpha), v2);
    const GradedSpace s = r_.word_space(v, star);
    const GradedSpace s2 = r_.word_space(v2, star);
    const auto act = r_.act_left(i, o(i, alpha), s);
    const auto act2 = r_.act_left(i, o(i, alpha), s2);
    const auto da = cat.carrier_dim(o(i, alpha));
    double worst = 0.0;
    for (const auto& [g, dim] : s.dims) {
      const std::size_t dim2 = s2.dim(g);
      if (dim2 == 0) continue;
      const auto [gamma, w] = head(i, g);
      for (std::size_t h = 0; h < dim; ++h) {
        for (std::size_t h2 = 0; h2 < dim2; ++h2) {
          Matrix lhs = Matrix::Zero(da * r_.carrier_dim(v), da * r_.carrier_dim(v2));
          for (const auto& pi : cat.irreducibles()) {
            const Word u = left_cons(am_, i, pi, w);
            const Block* b = block_for(act, u, gamma);
            const Block* b2 = block_for(act2, u, gamma);
            if (b == nullptr || b2 == nullptr) continue;
            for (std::size_t k = 0; k < b->mult; ++k) {
              lhs += cat.qdim(pi) * r_.assembly_basis(av, u, b->offset + k * b->source_dim + h) *
                     r_.assembly_basis(av2, u, b2->offset + k * b2->source_dim + h2).adjoint();
            }
          }
          const Matrix rhs =
              cat.qdim(gamma) * kron(eye(da), r_.assembly_basis(v, g, h) * r_.assembly_basis(v2, g, h2).adjoint());
          worst = std::max(worst, mat_dev(lhs, rhs));
        }
      }
    }
    return worst;
  }

  /// Psi_{v alpha, u} of the image of the basis vector e of
  /// ((v > *) < alpha)_u under the rearranging unitary.
  Matrix rearranged(const Word& va, const GradedMap& st, const Word& u, std::size_t e) const {
    return r_.assembly(va, u, st.block(u).col(static_cast<Eigen::Index>(e)));
  }

  double right_identity(std::size_t i, const IrrId& alpha, const Word& v, const Word& v2) const {
    const auto& cat = r_.category(i);
    const GradedSpace star = r_.star();
    const Word va = concat(v, single_letter(am_, i, alpha));
    const Word va2 = concat(v2, single_letter(am_, i, alpha));
    const GradedSpace s = r_.word_space(v, star);
    const GradedSpace s2 = r_.word_space(v2, star);
    const auto act = r_.act_right(i, s, o(i, alpha));
    const auto act2 = r_.act_right(i, s2, o(i, alpha));
    const GradedMap st = r_.sigma_tilde(v, i, alpha);
    const GradedMap st2 = r_.sigma_tilde(v2, i, alpha);
    const auto da = cat.carrier_dim(o(i, alpha));
    double worst = 0.0;
    for (const auto& [g, dim] : s.dims) {
      const std::size_t dim2 = s2.dim(g);
      if (dim2 == 0) continue;
      const auto [w, gamma] = last(i, g);
      for (std::size_t h = 0; h < dim; ++h) {
        for (std::size_t h2 = 0; h2 < dim2; ++h2) {
          Matrix lhs = Matrix::Zero(r_.carrier_dim(v) * da, r_.carrier_dim(v2) * da);
          for (const auto& pi : cat.irreducibles()) {
            const Word u = right_cons(am_, w, i, pi);
            const Block* b = block_for(act, u, gamma);
            const Block* b2 = block_for(act2, u, gamma);
            if (b == nullptr || b2 == nullptr) continue;
            for (std::size_t k = 0; k < b->mult; ++k) {
              lhs += cat.qdim(pi) * rearranged(va, st, u, b->offset + h * b->mult + k) *
                     rearranged(va2, st2, u, b2->offset + h2 * b2->mult + k).adjoint();
            }
          }
          const Matrix rhs =
              cat.qdim(gamma) * kron(r_.assembly_basis(v, g, h) * r_.assembly_basis(v2, g, h2).adjoint(), eye(da));
          worst = std::max(worst, mat_dev(lhs, rhs));
        }
      }
    }
    return worst;
  }

  double right_version(std::size_t i, const IrrId& alpha, const Word& v) const {
    const auto& cat = r_.category(i);
    const Object oa = o(i, alpha);
    const Word va = concat(v, single_letter(am_, i, alpha));
    const GradedSpace s = r_.word_space(v, r_.star());
    const auto act = r_.act_right(i, s, oa);
    const GradedMap st = r_.sigma_tilde(v, i, alpha);
    const auto da = cat.carrier_dim(oa);
    double worst = 0.0;
    for (const auto& [u, blocks] : act.layout) {
      const auto [w, pi] = last(i, u);
      for (const auto& b : blocks) {
        const auto& vs = cat.basis(join({b.gamma}, oa), pi);
        for (std::size_t h = 0; h < b.source_dim; ++h) {
          for (std::size_t k = 0; k < b.mult; ++k) {
            const Matrix lhs = rearranged(va, st, u, b.offset + h * b.mult + k);
            const Matrix rhs = std::sqrt(cat.qdim(b.gamma)) * kron(r_.assembly_basis(v, b.source, h), eye(da)) *
                               kron(eye(r_.carrier_dim(w)), vs[k]);
            worst = std::max(worst, mat_dev(lhs, rhs));
          }
        }
      }
    }
    return worst;
  }

  // Universal functor -------------------------------------------------------

  void functor(std::vector<CheckResult>& out) {
    const double t = tol(kExactTolerance);
    Tally id("functor preserves identities", "functor-identity", t);
    Tally co("functor preserves composition", "functor-composition", t);
    Tally in("functor preserves involution", "functor-involution", t);
    Tally tl("functor tensor with identity on the left", "functor-tensor-left", t);
    Tally tr("functor tensor with identity on the right", "functor-tensor-right", t);
    const GradedSpace star = r_.star();

    for (const auto& v : enumerate_general(am_, r_.cell(), r_.cell(), depth_, kUnbounded, true)) {
      id.run([&] { return word(v); }, [&] {
        return mat_dev(r_.universal(v, v, identity_map(r_.word_space(v, star))), eye(r_.carrier_dim(v)));
      });
    }
    const auto& pairs = sampled_pairs();
    for (const auto& [v, v2] : pairs) {
      const GradedMap eta = sample(v, v2);
      const Matrix psi = r_.universal(v, v2, eta);
      in.run([&] { return word(v) + " -> " + word(v2); },
             [&] { return mat_dev(r_.universal(v2, v, adjoint(eta)), psi.adjoint()); });
      std::size_t taken = 0;
      for (const auto& [w1, v3] : pairs) {
        if (!(w1 == v2) || taken == 3) continue;
        ++taken;
        const GradedMap zeta = sample(v2, v3);
        co.run([&] { return word(v) + " -> " + word(v2) + " -> " + word(v3); }, [&] {
          return mat_dev(r_.universal(v, v3, compose(zeta, eta)), r_.universal(v2, v3, zeta) * psi);
        });
      }
      for (const auto& a : letters_) {
        if (r_.category(a.factor).unit() == a.irr) continue;
        const std::size_t i = a.factor;
        const Object oa = o(i, a.irr);
        const Word al = single_letter(am_, i, a.irr);
        const auto da = r_.category(i).carrier_dim(oa);
        tl.run([&] { return lbl(i, a.irr) + " (x) (" + word(v) + " -> " + word(v2) + ")"; }, [&] {
          const GradedMap lifted = r_.left_id(i, oa, eta);
          return mat_dev(r_.universal(concat(al, v), concat(al, v2), lifted), kron(eye(da), psi));
        });
        tr.run([&] { return "(" + word(v) + " -> " + word(v2) + ") (x) " + lbl(i, a.irr); }, [&] {
          const GradedMap lifted = r_.extend(v, v2, eta, r_.act_left(i, oa, star).space);
          return mat_dev(r_.universal(concat(v, al), concat(v2, al), lifted), kron(psi, eye(da)));
        });
      }
    }
    for (auto* tl2 : {&id, &co, &in, &tl, &tr}) out.push_back(tl2->result());
  }

  const FreeRealization& r_;
  const Amalgam& am_;
  VerifyOptions options_;
  std::mt19937_64 rng_;
  std::size_t depth_ = 3;
  std::vector<Word> object_words_;
  std::vector<GradedSpace> objects_;
  std::vector<LetterRef> letters_;
  std::vector<Word> functor_words_;
  std::map<std::pair<Word, Word>, std::vector<GradedMap>> bases_;
  std::vector<std::pair<Word, Word>> pairs_;
  bool pairs_ready_ = false;
};

}  // namespace

bool VerificationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const CheckResult* VerificationReport::find(const std::string& tag) const {
  for (const auto& c : checks) {
    if (c.tag == tag) return &c;
  }
  return nullptr;
}

std::vector<CheckGroup> all_check_groups() {
  return {CheckGroup::factors,   CheckGroup::unitarity, CheckGroup::coherence, CheckGroup::grading,
          CheckGroup::extension, CheckGroup::assembly,  CheckGroup::functor};
}

std::string to_string(CheckGroup g) {
  switch (g) {
    case CheckGroup::factors: return "factors";
    case CheckGroup::unitarity: return "unitarity";
    case CheckGroup::coherence: return "coherence";
    case CheckGroup::grading: return "grading";
    case CheckGroup::extension: return "extension";
    case CheckGroup::assembly: return "assembly";
    case CheckGroup::functor: return "functor";
  }
  return "unknown";
}

VerificationReport verify_groups(const FreeRealization& r, const std::vector<CheckGroup>& groups,
                                 const VerifyOptions& options) {
  VerificationReport report;
  for (std::size_t i = 0; i < r.size(); ++i) report.amalgam += (i ? "*" : "") + r.category(i).name();
  report.depth = options.depth;
  report.seed = options.seed;
  Suite suite(r, options);
  for (const auto g : groups) suite.run(g, report.checks);
  return report;
}

VerificationReport verify_suite(const FreeRealization& r, const VerifyOptions& options) {
  return verify_groups(r, all_check_groups(), options);
}

}  // namespace freeprod
