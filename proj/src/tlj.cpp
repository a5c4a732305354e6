#include "freeprod/tlj.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <tuple>

namespace freeprod {

namespace {

std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  return static_cast<std::size_t>(std::stoul(s));
}

void check_delta(double delta) {
  if (!std::isfinite(delta) || delta < 2.0) {
    std::ostringstream msg;
    msg << "TLJ needs delta >= 2, got " << delta;
    throw ParameterError(msg.str());
  }
}

bool integral(double delta) { return delta == std::floor(delta) && delta < 1e6; }

std::optional<Rational> exact_chebyshev(double delta, std::size_t n) {
  if (!integral(delta)) return std::nullopt;
  const auto d = static_cast<std::int64_t>(delta);
  std::int64_t prev = 1;
  std::int64_t cur = d;
  if (n == 0) return Rational(1);
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(cur) > (std::int64_t{1} << 40)) return std::nullopt;
    const std::int64_t next = d * cur - prev;
    prev = cur;
    cur = next;
  }
  return Rational(cur);
}

std::string delta_text(double delta) {
  std::ostringstream out;
  out << delta;
  return out.str();
}

class TljSource final : public FusionSource {
 public:
  explicit TljSource(double delta) : delta_(delta), exact_(integral(delta)) {}

  std::vector<ZeroCell> zero_cells() const override { return {"a"}; }
  bool finite() const override { return false; }
  std::vector<IrrId> irreducibles(std::size_t depth) const override {
    std::vector<IrrId> out;
    for (std::size_t n = 0; n <= depth; ++n) out.push_back("f" + std::to_string(n));
    return out;
  }
  std::optional<IrrInfo> info(const IrrId& irr) const override {
    if (irr.size() < 2 || irr[0] != 'f') return std::nullopt;
    const auto n = parse_index(irr.substr(1));
    if (!n) return std::nullopt;
    return IrrInfo{irr, "a", "a", irr, chebyshev_dim(delta_, *n), exact_ ? exact_chebyshev(delta_, *n) : std::nullopt,
                   *n};
  }
  std::optional<IrrId> unit(const ZeroCell& cell) const override {
    if (cell != "a") return std::nullopt;
    return IrrId("f0");
  }
  Bundle fuse(const IrrId& a, const IrrId& b) const override {
    const auto m = *parse_index(a.substr(1));
    const auto n = *parse_index(b.substr(1));
    Bundle out{"a", "a", {}};
    for (std::size_t k = m > n ? m - n : n - m; k <= m + n; k += 2) out.add("f" + std::to_string(k), 1);
    return out;
  }
  bool exact() const override { return exact_; }
  std::string name() const override { return "tlj(" + delta_text(delta_) + ")"; }

 private:
  double delta_;
  bool exact_;
};

// Labels f<n>_<xy>; n even iff x == y.
class PointedTljSource final : public FusionSource {
 public:
  explicit PointedTljSource(double delta) : delta_(delta), exact_(integral(delta)) {}

  std::vector<ZeroCell> zero_cells() const override { return {"a", "b"}; }
  bool finite() const override { return false; }
  std::vector<IrrId> irreducibles(std::size_t depth) const override {
    std::vector<IrrId> out;
    for (std::size_t n = 0; n <= depth; ++n) {
      if (n % 2 == 0) {
        out.push_back(label(n, 'a', 'a'));
        out.push_back(label(n, 'b', 'b'));
      } else {
        out.push_back(label(n, 'a', 'b'));
        out.push_back(label(n, 'b', 'a'));
      }
    }
    return out;
  }
  std::optional<IrrInfo> info(const IrrId& irr) const override {
    const auto parsed = parse(irr);
    if (!parsed) return std::nullopt;
    const auto [n, x, y] = *parsed;
    return IrrInfo{irr,
                   std::string(1, x),
                   std::string(1, y),
                   label(n, y, x),
                   chebyshev_dim(delta_, n),
                   exact_ ? exact_chebyshev(delta_, n) : std::nullopt,
                   n};
  }
  std::optional<IrrId> unit(const ZeroCell& cell) const override {
    if (cell != "a" && cell != "b") return std::nullopt;
    return label(0, cell[0], cell[0]);
  }
  Bundle fuse(const IrrId& a, const IrrId& b) const override {
    const auto [m, x, y] = *parse(a);
    const auto [n, y2, z] = *parse(b);
    Bundle out{std::string(1, x), std::string(1, z), {}};
    for (std::size_t k = m > n ? m - n : n - m; k <= m + n; k += 2) out.add(label(k, x, z), 1);
    return out;
  }
  bool exact() const override { return exact_; }
  std::string name() const override { return "pointed-tlj(" + delta_text(delta_) + ")"; }

 private:
  static std::string label(std::size_t n, char x, char y) { return "f" + std::to_string(n) + "_" + x + y; }

  static std::optional<std::tuple<std::size_t, char, char>> parse(const IrrId& irr) {
    if (irr.size() < 5 || irr[0] != 'f') return std::nullopt;
    const auto us = irr.find('_');
    if (us == std::string::npos || us + 3 != irr.size()) return std::nullopt;
    const auto n = parse_index(irr.substr(1, us - 1));
    if (!n) return std::nullopt;
    const char x = irr[us + 1];
    const char y = irr[us + 2];
    if ((x != 'a' && x != 'b') || (y != 'a' && y != 'b')) return std::nullopt;
    if ((*n % 2 == 0) != (x == y)) return std::nullopt;
    return std::make_tuple(*n, x, y);
  }

  double delta_;
  bool exact_;
};

}  // namespace

double chebyshev_dim(double delta, std::size_t n) {
  double prev = 1.0;
  double cur = delta;
  if (n == 0) return 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double next = delta * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

CategorySpec tlj_spec(const TljParams& params) {
  check_delta(params.delta);
  return CategorySpec(std::make_shared<TljSource>(params.delta));
}

PointedSpec pointed_tlj(const TljParams& params) {
  check_delta(params.delta);
  PointedSpec p{CategorySpec(std::make_shared<PointedTljSource>(params.delta)), "a", "b", {}};
  p.point = single(p.ambient, "f1_ab");
  return p;
}

}  // namespace freeprod
