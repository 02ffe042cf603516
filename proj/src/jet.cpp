#include "curvlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace curvlab {

namespace {

std::int64_t pack_exponents(std::span<const std::uint8_t> e) {
  std::int64_t k = 0;
  for (std::uint8_t x : e) k = (k << 8) | x;
  return k;
}

// graded lex: degree block first, then lexicographic with x1 heaviest
void enumerate_rec(int dim, int pos, int remaining, std::vector<std::uint8_t>& cur,
                   std::vector<std::uint8_t>& out) {
  if (pos == dim - 1) {
    cur[pos] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = static_cast<std::uint8_t>(e);
    enumerate_rec(dim, pos + 1, remaining - e, cur, out);
  }
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  std::vector<std::uint8_t> cur(dim);
  for (int deg = 0; deg <= order; ++deg) enumerate_rec(dim, 0, deg, cur, exps_);

  const int n = size();
  degree_.resize(n);
  for (int i = 0; i < n; ++i) {
    int d = 0;
    for (auto e : exponents(i)) d += e;
    degree_[i] = d;
  }

  // sorted key table for index_of
  keys_.resize(n);
  perm_.resize(n);
  for (int i = 0; i < n; ++i) {
    keys_[i] = pack_exponents(exponents(i));
    perm_[i] = i;
  }
  std::vector<std::int32_t> tmp(perm_);
  std::sort(tmp.begin(), tmp.end(), [&](std::int32_t a, std::int32_t b) {
    return keys_[a] < keys_[b];
  });
  std::vector<std::int64_t> sorted_keys(n);
  for (int i = 0; i < n; ++i) sorted_keys[i] = keys_[tmp[i]];
  keys_ = std::move(sorted_keys);
  perm_ = std::move(tmp);

  // pair table: for each output gamma, every split gamma = alpha + beta
  conv_.off.resize(n + 1, 0);
  std::vector<int> alpha(dim), beta(dim), gamma(dim);
  for (int c = 0; c < n; ++c) {
    conv_.off[c] = static_cast<std::int32_t>(conv_.ia.size());
    auto ge = exponents(c);
    for (int i = 0; i < dim; ++i) gamma[i] = ge[i];
    // odometer over alpha <= gamma componentwise
    std::fill(alpha.begin(), alpha.end(), 0);
    while (true) {
      for (int i = 0; i < dim; ++i) beta[i] = gamma[i] - alpha[i];
      conv_.ia.push_back(index_of(alpha));
      conv_.ib.push_back(index_of(beta));
      int p = dim - 1;
      while (p >= 0) {
        if (alpha[p] < gamma[p]) {
          ++alpha[p];
          break;
        }
        alpha[p] = 0;
        --p;
      }
      if (p < 0) break;
    }
  }
  conv_.off[n] = static_cast<std::int32_t>(conv_.ia.size());

  // derivative tables aligned with the order-(K-1) prefix enumeration
  didx_.resize(dim);
  dfac_.resize(dim);
  if (order >= 1) {
    int nprev = 0;
    while (nprev < n && degree_[nprev] <= order - 1) ++nprev;
    std::vector<int> b(dim);
    for (int v = 0; v < dim; ++v) {
      didx_[v].resize(nprev);
      dfac_[v].resize(nprev);
      for (int t = 0; t < nprev; ++t) {
        auto be = exponents(t);
        for (int i = 0; i < dim; ++i) b[i] = be[i];
        b[v] += 1;
        didx_[v][t] = index_of(b);
        dfac_[v][t] = static_cast<double>(b[v]);
        b[v] -= 1;
      }
    }
  }
}

int JetLayout::index_of(std::span<const int> alpha) const {
  std::int64_t key = 0;
  int deg = 0;
  for (int i = 0; i < dim_; ++i) {
    if (alpha[i] < 0) return -1;
    key = (key << 8) | static_cast<std::uint8_t>(alpha[i]);
    deg += alpha[i];
  }
  if (deg > order_) return -1;
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  return perm_[it - keys_.begin()];
}

std::span<const std::int32_t> JetLayout::deriv_index(int v) const {
  return didx_[v];
}
std::span<const double> JetLayout::deriv_factor(int v) const { return dfac_[v]; }

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  if (dim < 1 || dim > 7 || order < 0 || order > 8)
    throw std::logic_error("JetLayout: dim must be 1..7, order 0..8");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(dim, order));
  return slot;
}

// ---------------------------------------------------------------------------

Jet Jet::zero(LayoutPtr layout) {
  Jet j;
  j.c_.assign(layout->size(), 0.0);
  j.layout_ = std::move(layout);
  return j;
}

Jet Jet::constant(LayoutPtr layout, double v) {
  Jet j = zero(std::move(layout));
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(LayoutPtr layout, int var, double value_at_point) {
  Jet j = zero(std::move(layout));
  j.c_[0] = value_at_point;
  if (j.order() >= 1) {
    // degree-1 block starts right after the constant term; the enumeration
    // within the block is x1, x2, ... in order
    j.c_[1 + var] = 1.0;
  }
  return j;
}

double Jet::coeff(std::span<const int> alpha) const {
  int idx = layout_->index_of(alpha);
  if (idx < 0) return 0.0;
  return c_[idx];
}

Jet Jet::derivative(int v) const {
  if (order() == 0) throw OrderExhausted("jet derivative: order 0 exhausted");
  Jet out = zero(JetLayout::get(dim(), order() - 1));
  auto idx = layout_->deriv_index(v);
  auto fac = layout_->deriv_factor(v);
  for (std::size_t t = 0; t < idx.size(); ++t) out.c_[t] = c_[idx[t]] * fac[t];
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  Jet out = zero(JetLayout::get(dim(), new_order));
  std::copy(c_.begin(), c_.begin() + out.size(), out.c_.begin());
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  kernels::active().scale(out.c_.data(), -1.0, out.c_.size());
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  kernels::active().add(c_.data(), o.c_.data(), std::min(c_.size(), o.c_.size()));
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  kernels::active().sub(c_.data(), o.c_.data(), std::min(c_.size(), o.c_.size()));
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  kernels::active().scale(c_.data(), s, c_.size());
  return *this;
}

void Jet::add_mul(const Jet& a, const Jet& b, double sign) {
  if (a.size() < size() || b.size() < size())
    throw std::logic_error("Jet::add_mul: operand order too low");
  kernels::active().conv_acc(c_.data(), a.c_.data(), b.c_.data(),
                             layout_->conv_table(), sign);
}

void Jet::add_scaled(const Jet& o, double s) {
  kernels::active().axpy(c_.data(), s, o.c_.data(),
                         std::min(c_.size(), o.c_.size()));
}

namespace {

LayoutPtr common_layout(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim()) throw std::logic_error("jet dim mismatch");
  if (a.order() <= b.order()) return a.layout();
  return b.layout();
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) {
  Jet out = Jet::zero(common_layout(a, b));
  std::copy(a.c_.begin(), a.c_.begin() + out.size(), out.c_.begin());
  out += b;
  return out;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet out = Jet::zero(common_layout(a, b));
  std::copy(a.c_.begin(), a.c_.begin() + out.size(), out.c_.begin());
  out -= b;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out = Jet::zero(common_layout(a, b));
  out.add_mul(a, b);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * jet_inverse(b); }

Jet operator+(const Jet& a, double s) {
  Jet out = a;
  out.c_[0] += s;
  return out;
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { return a + (-s); }
Jet operator-(double s, const Jet& a) {
  Jet out = -a;
  out.c_[0] += s;
  return out;
}
Jet operator*(const Jet& a, double s) {
  Jet out = a;
  out *= s;
  return out;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
Jet operator/(double s, const Jet& a) { return jet_inverse(a) * s; }

// ---------------------------------------------------------------------------
// univariate composition

Jet jet_compose(const Jet& u, std::span<const double> coeffs) {
  const int K = u.order();
  Jet w = u;               // u - u0
  w -= u.value();
  Jet r = Jet::constant(u.layout(), coeffs[K]);
  for (int k = K - 1; k >= 0; --k) {
    Jet next = Jet::constant(u.layout(), coeffs[k]);
    next.add_mul(r, w);
    r = std::move(next);
  }
  return r;
}

Jet jet_sin(const Jet& u) {
  const int K = u.order();
  const double s = std::sin(u.value()), c = std::cos(u.value());
  std::vector<double> f(K + 1);
  double fact = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) fact *= k;
    switch (k % 4) {
      case 0: f[k] = s / fact; break;
      case 1: f[k] = c / fact; break;
      case 2: f[k] = -s / fact; break;
      default: f[k] = -c / fact; break;
    }
  }
  return jet_compose(u, f);
}

Jet jet_cos(const Jet& u) {
  const int K = u.order();
  const double s = std::sin(u.value()), c = std::cos(u.value());
  std::vector<double> f(K + 1);
  double fact = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) fact *= k;
    switch (k % 4) {
      case 0: f[k] = c / fact; break;
      case 1: f[k] = -s / fact; break;
      case 2: f[k] = -c / fact; break;
      default: f[k] = s / fact; break;
    }
  }
  return jet_compose(u, f);
}

Jet jet_tan(const Jet& u) {
  // w' = 1 + w^2  =>  (k+1) w_{k+1} = [x^k](1 + w^2)
  const int K = u.order();
  std::vector<double> w(K + 1);
  w[0] = std::tan(u.value());
  for (int k = 0; k < K; ++k) {
    double conv = (k == 0) ? 1.0 : 0.0;
    for (int i = 0; i <= k; ++i) conv += w[i] * w[k - i];
    w[k + 1] = conv / (k + 1);
  }
  return jet_compose(u, w);
}

Jet jet_exp(const Jet& u) {
  const int K = u.order();
  const double e = std::exp(u.value());
  std::vector<double> f(K + 1);
  f[0] = e;
  for (int k = 1; k <= K; ++k) f[k] = f[k - 1] / k;
  return jet_compose(u, f);
}

Jet jet_log(const Jet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw DomainError("log of non-positive jet value");
  const int K = u.order();
  std::vector<double> f(K + 1);
  f[0] = std::log(u0);
  double pw = 1.0;
  for (int k = 1; k <= K; ++k) {
    pw *= u0;
    f[k] = ((k % 2) ? 1.0 : -1.0) / (k * pw);
  }
  return jet_compose(u, f);
}

Jet jet_sqrt(const Jet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw DomainError("sqrt of non-positive jet value");
  return jet_pow_real(u, 0.5);
}

Jet jet_inverse(const Jet& u) {
  const double u0 = u.value();
  if (u0 == 0.0) throw DomainError("division by jet with zero value part");
  const int K = u.order();
  std::vector<double> f(K + 1);
  f[0] = 1.0 / u0;
  for (int k = 1; k <= K; ++k) f[k] = -f[k - 1] / u0;
  return jet_compose(u, f);
}

Jet jet_pow_int(const Jet& u, long long m) {
  if (m < 0) return jet_inverse(jet_pow_int(u, -m));
  Jet result = Jet::constant(u.layout(), 1.0);
  Jet base = u;
  while (m > 0) {
    if (m & 1) result = result * base;
    m >>= 1;
    if (m) base = base * base;
  }
  return result;
}

Jet jet_pow_real(const Jet& u, double p) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw DomainError("real power of non-positive jet value");
  const int K = u.order();
  std::vector<double> f(K + 1);
  f[0] = std::pow(u0, p);
  for (int k = 1; k <= K; ++k) f[k] = f[k - 1] * (p - (k - 1)) / (k * u0);
  return jet_compose(u, f);
}

}  // namespace curvlab
