#include "arcsem/semijacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace arcsem {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_derived(const WeightParams& p) { return p.b == -1.0; }

std::string describe(const WeightParams& p) {
  std::ostringstream s;
  s.precision(17);
  s << "(t=" << p.t << ", a=" << p.a << ", b=" << p.b << ", c=" << p.c << ")";
  return s.str();
}

// Implicit QL on a symmetric tridiagonal matrix, carrying only the first
// row of the eigenvector matrix (Golub-Welsch needs nothing else).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  z.assign(n, 0.0);
  z[0] = 1.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0, m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw std::runtime_error("tridiagonal_ql: no convergence at index " +
                                   std::to_string(l));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Orthonormal Jacobi recurrence on [-1,1] for (1-s)^al (1+s)^be.
void jacobi_recurrence(double al, double be, int n, std::vector<double>& diag,
                       std::vector<double>& off) {
  diag.assign(n, 0.0);
  off.assign(std::max(n - 1, 0), 0.0);
  const double ab = al + be;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag[k] = (be - al) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag[k] = (be * be - al * al) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      b2 = 4.0 * k * (k + al) * (k + be) * (k + ab) /
           (s * s * (s + 1.0) * (s - 1.0));
    }
    off[k - 1] = std::sqrt(b2);
  }
}

double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1_series: no convergence in 10^4 terms");
}

struct ParamKey {
  double t, a, b, c;
  int n;
  bool operator<(const ParamKey& o) const {
    return std::tie(t, a, b, c, n) < std::tie(o.t, o.a, o.b, o.c, o.n);
  }
};

std::mutex g_cache_mutex;
std::map<ParamKey, RecurrenceCoeffs> g_recurrence_cache;
std::map<ParamKey, QuadratureRule> g_gauss_cache;

int bucket(int n) {
  int m = 32;
  while (m < n) m *= 2;
  return m;
}

// Discretised Stieltjes procedure on a Gauss-Jacobi rule with the
// (t-x)^c factor folded into the weights.
RecurrenceCoeffs stieltjes(const WeightParams& p, int n_max) {
  const double s = 2.0 * p.t - 1.0;
  const double rho = s + std::sqrt(s * s - 1.0);
  const int extra = static_cast<int>(std::ceil(25.0 / std::log(rho)));
  const int nq = std::max(4 * (n_max + 2), n_max + 2 + extra);
  QuadratureRule base = gauss_jacobi(p.a, p.b, nq);
  std::vector<double> w(nq), x = base.nodes;
  for (int q = 0; q < nq; ++q) w[q] = base.weights[q] * std::pow(p.t - x[q], p.c);

  const double gamma = weight_integral(p);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(total - gamma) > 1e-12 * gamma)
    throw std::runtime_error("recurrence_coeffs: discretised measure inaccurate for " +
                             describe(p) + " at index 0");

  RecurrenceCoeffs rc;
  rc.params = p;
  rc.a.assign(n_max + 1, 0.0);
  rc.b.assign(n_max + 1, 0.0);
  rc.c.assign(n_max + 1, 0.0);
  std::vector<double> prev(nq, 0.0), cur(nq, 1.0 / std::sqrt(total)), next(nq);
  double beta_n = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double alpha = 0.0;
    for (int q = 0; q < nq; ++q) alpha += w[q] * x[q] * cur[q] * cur[q];
    double norm2 = 0.0;
    for (int q = 0; q < nq; ++q) {
      next[q] = (x[q] - alpha) * cur[q] - beta_n * prev[q];
      norm2 += w[q] * next[q] * next[q];
    }
    const double beta_next = std::sqrt(norm2);
    if (!(beta_next > 0.0) || !std::isfinite(beta_next) || !std::isfinite(alpha))
      throw std::runtime_error("recurrence_coeffs: Stieltjes breakdown for " +
                               describe(p) + " at index " + std::to_string(n));
    rc.a[n] = alpha;
    rc.b[n] = beta_next;
    rc.c[n] = beta_n;
    for (int q = 0; q < nq; ++q) next[q] /= beta_next;
    std::swap(prev, cur);
    std::swap(cur, next);
    beta_n = beta_next;
  }
  return rc;
}

int count_tags(std::string_view tags, char ch) {
  return static_cast<int>(std::count(tags.begin(), tags.end(), ch));
}

}  // namespace

void validate(const WeightParams& p) {
  if (!(p.t > 1.0)) throw std::domain_error("WeightParams: t must exceed 1, got " + describe(p));
  if (!(p.a > -1.0)) throw std::domain_error("WeightParams: a must exceed -1, got " + describe(p));
  if (p.b == -1.0) return;
  if (!(p.b > -1.0 + 1e-10))
    throw std::domain_error("WeightParams: b must be -1 or exceed -1 + 1e-10, got " + describe(p));
}

double weight_integral(const WeightParams& p) {
  if (!(p.a > -1.0) || !(p.b > -1.0))
    throw std::domain_error("weight_integral: weight not integrable for " + describe(p));
  if (!(p.t > 1.0)) throw std::domain_error("weight_integral: t must exceed 1");
  return std::beta(p.a + 1.0, p.b + 1.0) * std::pow(p.t, p.c) *
         hyp2f1_series(p.a + 1.0, -p.c, p.a + p.b + 2.0, 1.0 / p.t);
}

LinearCoeffs linear_coeffs(const WeightParams& p) {
  const double g0 = weight_integral(p);
  const double g1 = weight_integral({p.t, p.a + 1.0, p.b, p.c});
  const double g2 = weight_integral({p.t, p.a + 2.0, p.b, p.c});
  const double alpha = g1 / g0;
  // ||x - alpha||^2 = g2 - 2 alpha g1 + alpha^2 g0 = g2 - g1^2/g0
  const double denom = g2 - g1 * g1 / g0;
  return {alpha, std::sqrt(g0 / denom)};
}

RecurrenceCoeffs recurrence_coeffs(const WeightParams& p, int n_max) {
  if (n_max < 0) throw std::invalid_argument("recurrence_coeffs: n_max < 0");
  validate(p);
  RecurrenceCoeffs out;
  out.params = p;
  if (is_derived(p)) {
    RecurrenceCoeffs plus = recurrence_coeffs({p.t, p.a, 1.0, p.c}, std::max(n_max - 1, 0));
    out.a.assign(n_max + 1, 0.0);
    out.b.assign(n_max + 1, 0.0);
    out.c.assign(n_max + 1, 0.0);
    out.a[0] = 1.0;
    out.b[0] = -1.0;
    for (int n = 1; n <= n_max; ++n) {
      out.a[n] = plus.a[n - 1];
      out.b[n] = plus.b[n - 1];
      out.c[n] = plus.c[n - 1];
    }
    return out;
  }
  const ParamKey key{p.t, p.a, p.b, p.c, bucket(n_max + 1)};
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_recurrence_cache.find(key);
    if (it != g_recurrence_cache.end()) {
      out = it->second;
      out.a.resize(n_max + 1);
      out.b.resize(n_max + 1);
      out.c.resize(n_max + 1);
      return out;
    }
  }
  RecurrenceCoeffs full = stieltjes(p, key.n);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_recurrence_cache.emplace(key, full);
  }
  out = full;
  out.a.resize(n_max + 1);
  out.b.resize(n_max + 1);
  out.c.resize(n_max + 1);
  return out;
}

double evaluate(const RecurrenceCoeffs& rc, const double* f, int n, double x) {
  if (n == 0) return 0.0;
  if (n > rc.size())
    throw std::invalid_argument("evaluate: expansion longer than recurrence data");
  double u1 = 0.0, u2 = 0.0;  // u_{k+1}, u_{k+2}
  for (int k = n - 1; k >= 0; --k) {
    const double ak = (x - rc.a[k]) / rc.b[k];
    const double bk1 = (k + 1 < rc.size()) ? -rc.c[k + 1] / rc.b[k + 1] : 0.0;
    const double uk = f[k] + ak * u1 + bk1 * u2;
    u2 = u1;
    u1 = uk;
  }
  return u1;
}

double evaluate(const RecurrenceCoeffs& rc, const Eigen::VectorXd& f, double x) {
  return evaluate(rc, f.data(), static_cast<int>(f.size()), x);
}

void eval_basis(const RecurrenceCoeffs& rc, double x, int n, double* p, double* dp) {
  if (n <= 0) return;
  if (n - 1 > rc.size())
    throw std::invalid_argument("eval_basis: recurrence data too short");
  p[0] = 1.0;
  if (dp) dp[0] = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double pm = k > 0 ? p[k - 1] : 0.0;
    p[k + 1] = ((x - rc.a[k]) * p[k] - rc.c[k] * pm) / rc.b[k];
    if (dp) {
      const double dpm = k > 0 ? dp[k - 1] : 0.0;
      dp[k + 1] = ((x - rc.a[k]) * dp[k] + p[k] - rc.c[k] * dpm) / rc.b[k];
    }
  }
}

BandedOperator jacobi_matrix(const RecurrenceCoeffs& rc, int n) {
  if (n < 1) throw std::invalid_argument("jacobi_matrix: n < 1");
  if (n > rc.size()) throw std::invalid_argument("jacobi_matrix: recurrence data too short");
  BandedOperator j(n, n, 1, 1);
  for (int k = 0; k < n; ++k) {
    if (k > 0) j.at(k - 1, k) = rc.c[k];
    j.at(k, k) = rc.a[k];
    if (k + 1 < n) j.at(k + 1, k) = rc.b[k];
  }
  return j;
}

QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> offdiag,
                            double mu0) {
  const int n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("golub_welsch: empty matrix");
  std::vector<double> z;
  offdiag.resize(n, 0.0);
  tridiagonal_ql(diag, offdiag, z);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = diag[order[k]];
    r.weights[k] = mu0 * z[order[k]] * z[order[k]];
  }
  return r;
}

QuadratureRule gauss_jacobi(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n < 1");
  if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("gauss_jacobi: a, b must exceed -1");
  // x = (1+s)/2 maps x^a (1-x)^b to (1+s)^a (1-s)^b.
  std::vector<double> diag, off;
  jacobi_recurrence(b, a, n, diag, off);
  QuadratureRule r = golub_welsch(diag, off, std::beta(a + 1.0, b + 1.0));
  for (double& x : r.nodes) x = 0.5 * (1.0 + x);
  return r;
}

QuadratureRule gauss_legendre(int n) {
  std::vector<double> diag, off;
  jacobi_recurrence(0.0, 0.0, n, diag, off);
  QuadratureRule r = golub_welsch(diag, off, 2.0);
  // Newton polish; weights from 2 / ((1 - x^2) P_n'(x)^2).
  for (int k = 0; k < n; ++k) {
    double x = r.nodes[k], dp = 1.0;
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
    }
    r.nodes[k] = x;
    r.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

QuadratureRule gauss_rule(const WeightParams& p, int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: n < 1");
  if (is_derived(p)) throw std::domain_error("gauss_rule: weight not integrable");
  const ParamKey key{p.t, p.a, p.b, p.c, n};
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_gauss_cache.find(key);
    if (it != g_gauss_cache.end()) return it->second;
  }
  const RecurrenceCoeffs rc = recurrence_coeffs(p, n);
  std::vector<double> diag(rc.a.begin(), rc.a.begin() + n);
  std::vector<double> off(rc.b.begin(), rc.b.begin() + (n - 1));
  QuadratureRule r = golub_welsch(diag, off, weight_integral(p));
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_gauss_cache.emplace(key, r);
  }
  return r;
}

QuadratureRule gauss_radau(const WeightParams& p, int n, double endpoint) {
  if (n < 1) throw std::invalid_argument("gauss_radau: n < 1");
  if (is_derived(p)) throw std::domain_error("gauss_radau: weight not integrable");
  const double gamma = weight_integral(p);
  QuadratureRule r;
  r.fixed_node = true;
  if (n == 1) {
    r.nodes = {endpoint};
    r.weights = {gamma};
    return r;
  }
  const RecurrenceCoeffs rc = recurrence_coeffs(p, n);
  std::vector<double> diag(rc.a.begin(), rc.a.begin() + n);
  std::vector<double> off(rc.b.begin(), rc.b.begin() + (n - 1));
  // (J_{n-1} - z I) delta = b_{n-2}^2 e_{n-1}; Thomas algorithm.
  const int m = n - 1;
  std::vector<double> cp(m), dp(m);
  for (int i = 0; i < m; ++i) {
    const double di = diag[i] - endpoint;
    const double lo = i > 0 ? off[i - 1] : 0.0;
    const double rhs = (i == m - 1) ? off[m - 1] * off[m - 1] : 0.0;
    const double denom = di - (i > 0 ? lo * cp[i - 1] : 0.0);
    cp[i] = (i + 1 < m) ? off[i] / denom : 0.0;
    dp[i] = (rhs - (i > 0 ? lo * dp[i - 1] : 0.0)) / denom;
  }
  const double delta_last = dp[m - 1];
  diag[n - 1] = endpoint + delta_last;
  QuadratureRule g = golub_welsch(diag, off, gamma);
  // Put the pinned node first and snap it exactly.
  int pin = 0;
  for (int k = 1; k < n; ++k)
    if (std::abs(g.nodes[k] - endpoint) < std::abs(g.nodes[pin] - endpoint)) pin = k;
  r.nodes.push_back(endpoint);
  for (int k = 0; k < n; ++k)
    if (k != pin) r.nodes.push_back(g.nodes[k]);

  // Eigenvalues near the pinned end carry only absolute accuracy, so
  // polish the free nodes by Newton on the kernel polynomial
  // P_n(x) P_{n-1}(e) - P_{n-1}(x) P_n(e), then take Christoffel weights.
  std::vector<double> pv(n + 1), dv(n + 1);
  eval_basis(rc, endpoint, n + 1, pv.data());
  const double en = pv[n], em = pv[n - 1];
  for (int k = 1; k < n; ++k) {
    double x = r.nodes[k];
    for (int it = 0; it < 8; ++it) {
      eval_basis(rc, x, n + 1, pv.data(), dv.data());
      const double gx = pv[n] * em - pv[n - 1] * en;
      const double dg = dv[n] * em - dv[n - 1] * en;
      if (dg == 0.0) break;
      const double step = gx / dg;
      x -= step;
      if (std::abs(step) <= 1e-17 * std::max(std::abs(x - endpoint), 1e-300)) break;
    }
    r.nodes[k] = x;
  }
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    eval_basis(rc, r.nodes[k], n, pv.data());
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += pv[j] * pv[j];
    r.weights[k] = gamma / s;
  }
  return r;
}

BandedOperator project_columns(const WeightParams& dst, int rows, int cols, int lower,
                               int upper, int max_degree,
                               const std::function<void(double, double*)>& eval_cols) {
  const int nq = (rows + max_degree + 1) / 2 + 2;
  const QuadratureRule g = gauss_rule(dst, nq);
  const RecurrenceCoeffs rc = recurrence_coeffs(dst, rows + 1);
  const double gamma = weight_integral(dst);
  const int lo = lower + 2, up = upper + 2;  // computed band incl. check diagonals
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(lo + up + 1, cols);
  std::vector<double> pd(rows), pc(cols);
  for (int q = 0; q < nq; ++q) {
    const double x = g.nodes[q], w = g.weights[q];
    eval_basis(rc, x, rows, pd.data());
    eval_cols(x, pc.data());
    for (int j = 0; j < cols; ++j) {
      const double wc = w * pc[j];
      const int i0 = std::max(0, j - up), i1 = std::min(rows - 1, j + lo);
      for (int i = i0; i <= i1; ++i) acc(up + i - j, j) += wc * pd[i];
    }
  }
  acc /= gamma;
  BandedOperator out(rows, cols, lower, upper);
  double scale = 0.0;
  for (int j = 0; j < cols; ++j) {
    const int i0 = std::max(0, j - upper), i1 = std::min(rows - 1, j + lower);
    for (int i = i0; i <= i1; ++i) {
      out.at(i, j) = acc(up + i - j, j);
      scale = std::max(scale, std::abs(acc(up + i - j, j)));
    }
  }
  for (int j = 0; j < cols; ++j) {
    const int i0 = std::max(0, j - up), i1 = std::min(rows - 1, j + lo);
    for (int i = i0; i <= i1; ++i) {
      if (out.in_band(i, j)) continue;
      if (std::abs(acc(up + i - j, j)) > 1e-9 * std::max(scale, 1.0)) {
        std::ostringstream msg;
        msg << "project_columns: entry (" << i << ", " << j << ") = "
            << acc(up + i - j, j) << " outside declared band (" << lower
            << ", " << upper << ")";
        throw std::logic_error(msg.str());
      }
    }
  }
  return out;
}

BandedOperator connection_matrix(const WeightParams& src, const WeightParams& dst, int n) {
  if (n < 1) throw std::invalid_argument("connection_matrix: n < 1");
  validate(src);
  validate(dst);
  if (src.t != dst.t) throw std::invalid_argument("connection_matrix: families must share t");
  if (src == dst) return BandedOperator::identity(n);
  const double da = dst.a - src.a, db = dst.b - src.b, dc = dst.c - src.c;
  auto step_ok = [](double d) {
    return d == 0.0 || d == 1.0 || d == 2.0;
  };
  if (!step_ok(da) || !step_ok(db) || !step_ok(dc) || is_derived(dst))
    throw std::invalid_argument("connection_matrix: unsupported parameter pair " +
                                describe(src) + " -> " + describe(dst));
  const int upper = static_cast<int>(da + db + dc);
  const RecurrenceCoeffs rs = recurrence_coeffs(src, n + 1);
  return project_columns(dst, n, n, 0, upper, n - 1, [&](double x, double* out) {
    eval_basis(rs, x, n, out);
  });
}

BandedOperator weighted_connection(const WeightParams& src, const WeightParams& dst, int n,
                                   std::string_view tags) {
  if (n < 1) throw std::invalid_argument("weighted_connection: n < 1");
  const int ta = count_tags(tags, 'a'), tb = count_tags(tags, 'b'), tc = count_tags(tags, 'c');
  if (ta + tb + tc != static_cast<int>(tags.size()) || ta > 1 || tb > 1 || tc > 1)
    throw std::invalid_argument("weighted_connection: tags must be a subset of {a,b,c}");
  if (src.t != dst.t || dst.a != src.a - ta || dst.b != src.b - tb || dst.c != src.c - tc)
    throw std::invalid_argument("weighted_connection: unsupported step " + describe(src) +
                                " -> " + describe(dst));
  const int k = ta + tb + tc;
  const double t = src.t;
  auto multiplier = [=](double x) {
    double m = 1.0;
    if (ta) m *= x;
    if (tb) m *= 1.0 - x;
    if (tc) m *= t - x;
    return m;
  };
  if (is_derived(src)) {
    if (tb) throw std::invalid_argument("weighted_connection: b tag unsupported for b = -1");
    // First column from m(x) = m(1) + (1 - x) g(x); later columns from the
    // b = 1 families, since P_j = (1 - x) P^{+}_{j-1}.
    const WeightParams sp{t, src.a, 1.0, src.c}, dp{t, dst.a, 1.0, dst.c};
    BandedOperator out(n, n, k, 0);
    out.at(0, 0) = multiplier(1.0);
    if (n > 1) {
      const int rows = n - 1;
      const double m1 = multiplier(1.0);
      BandedOperator g0 = project_columns(dp, rows, 1, k, 0, std::max(k - 1, 0),
                                          [&](double x, double* o) {
                                            o[0] = (multiplier(x) - m1) / (1.0 - x);
                                          });
      for (int i = 0; i < std::min(rows, k); ++i) out.at(i + 1, 0) = g0(i, 0);
      BandedOperator inner = weighted_connection(sp, dp, rows, tags);
      for (int j = 0; j < rows; ++j)
        for (int i = j; i <= std::min(rows - 1, j + k); ++i) out.at(i + 1, j + 1) = inner(i, j);
    }
    return out;
  }
  validate(src);
  validate(dst);
  const RecurrenceCoeffs rs = recurrence_coeffs(src, n + 1);
  std::vector<double> tmp(n);
  return project_columns(dst, n, n, k, 0, n - 1 + k, [&](double x, double* out) {
    eval_basis(rs, x, n, out);
    const double m = multiplier(x);
    for (int j = 0; j < n; ++j) out[j] *= m;
  });
}

BandedOperator differentiation_matrix(const WeightParams& src, int n) {
  if (n < 1) throw std::invalid_argument("differentiation_matrix: n < 1");
  validate(src);
  const WeightParams dst{src.t, src.a + 1.0, src.b + 1.0, src.c + 1.0};
  const RecurrenceCoeffs rs = recurrence_coeffs(src, n + 1);
  std::vector<double> p(n);
  return project_columns(dst, n, n, -1, 2, n - 2 > 0 ? n - 2 : 0, [&](double x, double* out) {
    eval_basis(rs, x, n, p.data(), out);
  });
}

}  // namespace arcsem
