#include "curvlab/charts.hpp"

#include <charconv>
#include <cmath>

#include "curvlab/rng.hpp"

namespace curvlab::charts {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> coord_names(const std::string& stem, int n) {
  std::vector<std::string> c(n);
  for (int i = 0; i < n; ++i) c[i] = stem + std::to_string(i + 1);
  return c;
}

std::vector<Expression> parse_entries(const std::vector<std::string>& text,
                                      const std::vector<std::string>& coords) {
  std::vector<Expression> e;
  e.reserve(text.size());
  for (const auto& t : text) e.push_back(Expression::parse(t, coords));
  return e;
}

}  // namespace

Chart sphere_polar(int n, const std::string& factor_expr) {
  if (n < 2) throw DimensionError("sphere_polar requires n >= 2");
  std::vector<std::string> coords;
  for (int i = 1; i < n; ++i) coords.push_back("t" + std::to_string(i));
  coords.push_back("phi");

  std::vector<std::string> entries(static_cast<std::size_t>(n) * n, "0");
  for (int k = 0; k < n; ++k) {
    std::string diag = "1";
    for (int i = 0; i < k; ++i) diag += " * sin(t" + std::to_string(i + 1) + ")^2";
    if (!factor_expr.empty())
      diag = "exp(2*(" + factor_expr + ")) * (" + diag + ")";
    entries[static_cast<std::size_t>(k) * n + k] = diag;
  }

  std::vector<std::array<double, 2>> box;
  std::vector<bool> periodic;
  for (int i = 1; i < n; ++i) {
    box.push_back({0.0, kTwoPi / 2.0});
    periodic.push_back(false);
  }
  box.push_back({0.0, kTwoPi});
  periodic.push_back(true);

  std::string label = "S^" + std::to_string(n) +
                      (factor_expr.empty() ? " (round)" : " * exp(2*(" + factor_expr + "))");
  return Chart(coords, box, periodic, parse_entries(entries, coords), label,
               ChartKind::SpherePolar);
}

Chart torus(int n, double period, const std::vector<std::string>& entries) {
  auto coords = coord_names("x", n);
  std::vector<std::array<double, 2>> box(n, {0.0, period});
  std::vector<bool> periodic(n, true);
  return Chart(coords, box, periodic, parse_entries(entries, coords),
               "T^" + std::to_string(n), ChartKind::Torus);
}

Chart torus_conformal(int n, double period, const std::string& w_expr) {
  auto coords = coord_names("x", n);
  std::vector<std::string> entries(static_cast<std::size_t>(n) * n, "0");
  for (int i = 0; i < n; ++i)
    entries[static_cast<std::size_t>(i) * n + i] = "exp(2*(" + w_expr + "))";
  std::vector<std::array<double, 2>> box(n, {0.0, period});
  std::vector<bool> periodic(n, true);
  return Chart(coords, box, periodic, parse_entries(entries, coords),
               "T^" + std::to_string(n) + " conformally flat",
               ChartKind::Torus);
}

Chart torus_random_trig(int n, std::uint64_t seed, double amplitude) {
  Rng rng(seed);
  auto coords = coord_names("x", n);
  std::vector<std::string> entries(static_cast<std::size_t>(n) * n, "0");
  // Each entry gets two product-of-trig terms; per-entry amplitude is capped
  // at `amplitude` so Gershgorin keeps the matrix positive definite.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::string e = (i == j) ? "1" : "0";
      for (int term = 0; term < 2; ++term) {
        double a = rng.uniform(-0.5, 0.5) * amplitude;
        int p = static_cast<int>(rng.next_u64() % n);
        int q = static_cast<int>(rng.next_u64() % n);
        double cp = rng.uniform(0.0, kTwoPi);
        double cq = rng.uniform(0.0, kTwoPi);
        e += " + " + fmt(a) + "*sin(x" + std::to_string(p + 1) + " + " + fmt(cp) +
             ")*cos(x" + std::to_string(q + 1) + " + " + fmt(cq) + ")";
      }
      entries[static_cast<std::size_t>(i) * n + j] = e;
      entries[static_cast<std::size_t>(j) * n + i] = e;
    }
  }
  std::vector<std::array<double, 2>> box(n, {0.0, kTwoPi});
  std::vector<bool> periodic(n, true);
  return Chart(coords, box, periodic, parse_entries(entries, coords),
               "T^" + std::to_string(n) + " random trig (seed " +
                   std::to_string(seed) + ")",
               ChartKind::Torus);
}

Chart flat_box(int n) {
  auto coords = coord_names("x", n);
  std::vector<std::string> entries(static_cast<std::size_t>(n) * n, "0");
  for (int i = 0; i < n; ++i) entries[static_cast<std::size_t>(i) * n + i] = "1";
  std::vector<std::array<double, 2>> box(n, {0.0, 1.0});
  std::vector<bool> periodic(n, false);
  return Chart(coords, box, periodic, parse_entries(entries, coords),
               "flat box [0,1]^" + std::to_string(n), ChartKind::FlatBox);
}

Chart product_s2xs2(double a, double b) {
  std::vector<std::string> coords = {"t1", "p1", "t2", "p2"};
  std::vector<std::string> entries(16, "0");
  entries[0] = fmt(a * a);
  entries[5] = fmt(a * a) + " * sin(t1)^2";
  entries[10] = fmt(b * b);
  entries[15] = fmt(b * b) + " * sin(t2)^2";
  std::vector<std::array<double, 2>> box = {
      {0.0, kTwoPi / 2.0}, {0.0, kTwoPi}, {0.0, kTwoPi / 2.0}, {0.0, kTwoPi}};
  std::vector<bool> periodic = {false, true, false, true};
  return Chart(coords, box, periodic, parse_entries(entries, coords),
               "S^2 x S^2", ChartKind::ProductS2xS2);
}

}  // namespace curvlab::charts
