#include "arcsem/structmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace arcsem {

namespace {

int wrap(int j, int n) { return ((j % n) + n) % n; }

}  // namespace

CyclicBanded::CyclicBanded(int n, int lower, int upper) : n_(n), l_(lower), u_(upper) {
  if (n <= 0 || lower < 0 || upper < 0)
    throw std::invalid_argument("CyclicBanded: bad dimensions");
  data_.assign(static_cast<std::size_t>(n) * (lower + upper + 1), 0.0);
}

bool CyclicBanded::slot(int i, int j, int& d) const {
  for (d = -l_; d <= u_; ++d)
    if (column(i, d) == j) return true;
  return false;
}

double CyclicBanded::operator()(int i, int j) const {
  int d;
  return slot(i, j, d) ? by_offset(i, d) : 0.0;
}

double& CyclicBanded::at(int i, int j) {
  int d;
  if (!slot(i, j, d)) throw std::out_of_range("CyclicBanded: entry outside structure");
  return by_offset(i, d);
}

Eigen::MatrixXd CyclicBanded::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int d = -l_; d <= u_; ++d) a(i, column(i, d)) += by_offset(i, d);
  return a;
}

CyclicBanded CyclicBanded::transpose() const {
  CyclicBanded t(n_, u_, l_);
  for (int i = 0; i < n_; ++i)
    for (int d = -l_; d <= u_; ++d) t.at(column(i, d), i) += by_offset(i, d);
  return t;
}

CyclicBanded multiply(const CyclicBanded& a, const CyclicBanded& b) {
  if (a.n() != b.n()) throw std::invalid_argument("CyclicBanded multiply: size mismatch");
  CyclicBanded c(a.n(), a.lower() + b.lower(), a.upper() + b.upper());
  for (int i = 0; i < a.n(); ++i)
    for (int d1 = -a.lower(); d1 <= a.upper(); ++d1) {
      const double x = a.by_offset(i, d1);
      if (x == 0.0) continue;
      const int k = a.column(i, d1);
      for (int d2 = -b.lower(); d2 <= b.upper(); ++d2)
        c.at(i, b.column(k, d2)) += x * b.by_offset(k, d2);
    }
  return c;
}

CB3Arrowhead::CB3Arrowhead(int m, int p, int l, int u, int lambda, int mu)
    : m_(m), p_(p), l_(l), u_(u), lambda_(lambda), mu_(mu) {
  if (m <= 0 || p < 0 || l < 0 || u < 0 || lambda < 0 || mu < 0)
    throw std::invalid_argument("CB3Arrowhead: bad structure");
  a0_ = CyclicBanded(m, lambda + mu, lambda + mu);
  for (int k = 0; k < u; ++k) b_.emplace_back(m, lambda, mu);
  for (int k = 0; k < l; ++k) c_.emplace_back(m, mu, lambda);
  d_.assign(static_cast<std::size_t>(p) * (l + u + 1) * m, 0.0);
}

bool CB3Arrowhead::in_structure(int r, int c) const {
  if (r < 0 || c < 0 || r >= size() || c >= size()) return false;
  const int br = r / m_, bc = c / m_, ir = r % m_, ic = c % m_;
  if (br == 0 && bc == 0) return a0_.in_structure(ir, ic);
  if (br == 0) return bc <= u_ && b_[bc - 1].in_structure(ir, ic);
  if (bc == 0) return br <= l_ && c_[br - 1].in_structure(ir, ic);
  const int d = bc - br;
  return ir == ic && d >= -l_ && d <= u_;
}

double CB3Arrowhead::get(int r, int c) const {
  if (r < 0 || c < 0 || r >= size() || c >= size())
    throw std::out_of_range("CB3Arrowhead: index out of range");
  const int br = r / m_, bc = c / m_, ir = r % m_, ic = c % m_;
  if (br == 0 && bc == 0) return a0_(ir, ic);
  if (br == 0) return bc <= u_ ? b_[bc - 1](ir, ic) : 0.0;
  if (bc == 0) return br <= l_ ? c_[br - 1](ir, ic) : 0.0;
  const int d = bc - br;
  if (ir != ic || d < -l_ || d > u_) return 0.0;
  return d_[index(ir, br - 1, d)];
}

void CB3Arrowhead::add(int r, int c, double v) {
  if (!in_structure(r, c)) {
    std::ostringstream os;
    os << "CB3Arrowhead: entry (" << r << ", " << c << ") outside structure";
    throw std::out_of_range(os.str());
  }
  const int br = r / m_, bc = c / m_, ir = r % m_, ic = c % m_;
  if (br == 0 && bc == 0)
    a0_.at(ir, ic) += v;
  else if (br == 0)
    b_[bc - 1].at(ir, ic) += v;
  else if (bc == 0)
    c_[br - 1].at(ir, ic) += v;
  else
    d_[index(ir, br - 1, bc - br)] += v;
}

void CB3Arrowhead::set(int r, int c, double v) {
  add(r, c, v - get(r, c));
}

Eigen::MatrixXd CB3Arrowhead::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size(), size());
  a.topLeftCorner(m_, m_) = a0_.dense();
  for (int k = 1; k <= u_ && k <= p_; ++k) a.block(0, k * m_, m_, m_) = b_[k - 1].dense();
  for (int k = 1; k <= l_ && k <= p_; ++k) a.block(k * m_, 0, m_, m_) = c_[k - 1].dense();
  for (int k = 0; k < p_; ++k)
    for (int d = -l_; d <= u_; ++d) {
      if (k + d < 0 || k + d >= p_) continue;
      for (int i = 0; i < m_; ++i) a((k + 1) * m_ + i, (k + d + 1) * m_ + i) = d_[index(i, k, d)];
    }
  return a;
}

SparseMatrix CB3Arrowhead::sparse() const {
  std::vector<Eigen::Triplet<double>> t;
  auto add_cyclic = [&](const CyclicBanded& c, int r0, int c0) {
    for (int i = 0; i < m_; ++i)
      for (int d = -c.lower(); d <= c.upper(); ++d) {
        const double v = c.by_offset(i, d);
        if (v != 0.0) t.emplace_back(r0 + i, c0 + c.column(i, d), v);
      }
  };
  add_cyclic(a0_, 0, 0);
  for (int k = 1; k <= u_ && k <= p_; ++k) add_cyclic(b_[k - 1], 0, k * m_);
  for (int k = 1; k <= l_ && k <= p_; ++k) add_cyclic(c_[k - 1], k * m_, 0);
  for (int k = 0; k < p_; ++k)
    for (int d = -l_; d <= u_; ++d) {
      if (k + d < 0 || k + d >= p_) continue;
      for (int i = 0; i < m_; ++i) {
        const double v = d_[index(i, k, d)];
        if (v != 0.0) t.emplace_back((k + 1) * m_ + i, (k + d + 1) * m_ + i, v);
      }
    }
  // Aliased cyclic slots (tiny m) sum, matching dense().
  SparseMatrix s(size(), size());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

Eigen::VectorXd CB3Arrowhead::apply(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw std::invalid_argument("CB3Arrowhead::apply: size mismatch");
  return sparse() * x;
}

CB3Arrowhead CB3Arrowhead::transpose() const {
  CB3Arrowhead t(m_, p_, u_, l_, lambda_, mu_);
  t.a0_ = a0_.transpose();
  for (int k = 0; k < l_; ++k) t.b_[k] = c_[k].transpose();
  for (int k = 0; k < u_; ++k) t.c_[k] = b_[k].transpose();
  for (int k = 0; k < p_; ++k)
    for (int d = -l_; d <= u_; ++d) {
      if (k + d < 0 || k + d >= p_) continue;
      for (int i = 0; i < m_; ++i) t.d_[t.index(i, k + d, -d)] = d_[index(i, k, d)];
    }
  return t;
}

namespace {

struct Structure {
  int l = 0, u = 0, lambda = 0, mu = 0;
};

// Cyclic offset of column ic relative to row ir, folded into (-m/2, m/2].
int cyclic_offset(int ir, int ic, int m) {
  int d = wrap(ic - ir, m);
  if (2 * d > m) d -= m;
  return d;
}

Structure infer(const SparseMatrix& a, int m, double tol) {
  Structure s;
  int head_lo = 0, head_hi = 0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (std::abs(it.value()) <= tol) continue;
      const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
      const int br = r / m, bc = col / m, ir = r % m, ic = col % m;
      const int d = cyclic_offset(ir, ic, m);
      if (br == 0 && bc == 0) {
        head_lo = std::max(head_lo, -d);
        head_hi = std::max(head_hi, d);
      } else if (br == 0) {
        s.u = std::max(s.u, bc);
        s.lambda = std::max(s.lambda, -d);
        s.mu = std::max(s.mu, d);
      } else if (bc == 0) {
        s.l = std::max(s.l, br);
        s.mu = std::max(s.mu, -d);
        s.lambda = std::max(s.lambda, d);
      } else {
        if (ir != ic)
          throw std::domain_error("from_sparse: tail block is not diagonal");
        s.l = std::max(s.l, br - bc);
        s.u = std::max(s.u, bc - br);
      }
    }
  // Head sub-bandwidth is lambda + mu; widen the split if the head needs more.
  const int need = std::max(head_lo, head_hi);
  if (s.lambda + s.mu < need) s.lambda = need - s.mu;
  return s;
}

}  // namespace

CB3Arrowhead CB3Arrowhead::from_sparse(const SparseMatrix& a, int m, double drop_tol) {
  if (m <= 0 || a.rows() != a.cols() || a.rows() % m != 0)
    throw std::invalid_argument("from_sparse: size must be a multiple of m");
  const Structure s = infer(a, m, drop_tol);
  return from_sparse(a, m, s.l, s.u, s.lambda, s.mu, drop_tol);
}

CB3Arrowhead CB3Arrowhead::from_sparse(const SparseMatrix& a, int m, int l, int u, int lambda,
                                       int mu, double drop_tol) {
  if (m <= 0 || a.rows() != a.cols() || a.rows() % m != 0)
    throw std::invalid_argument("from_sparse: size must be a multiple of m");
  const int p = static_cast<int>(a.rows() / m) - 1;
  CB3Arrowhead out(m, p, l, u, lambda, mu);
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (std::abs(it.value()) <= drop_tol) continue;
      const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
      if (!out.in_structure(r, col)) {
        std::ostringstream os;
        os << "from_sparse: entry (" << r << ", " << col << ") = " << it.value()
           << " outside CB3(" << l << "," << u << ";" << lambda << "," << mu << ")";
        throw std::domain_error(os.str());
      }
      out.add(r, col, it.value());
    }
  return out;
}

std::string CB3Arrowhead::to_json() const {
  nlohmann::json j;
  j["format"] = "cb3arrowhead";
  j["version"] = 1;
  j["m"] = m_;
  j["p"] = p_;
  j["l"] = l_;
  j["u"] = u_;
  j["lambda"] = lambda_;
  j["mu"] = mu_;
  j["A0"] = a0_.raw();
  j["B"] = nlohmann::json::array();
  for (const auto& b : b_) j["B"].push_back(b.raw());
  j["C"] = nlohmann::json::array();
  for (const auto& c : c_) j["C"].push_back(c.raw());
  j["D"] = d_;
  return j.dump();
}

CB3Arrowhead CB3Arrowhead::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format") != "cb3arrowhead") throw std::invalid_argument("from_json: wrong format");
  CB3Arrowhead out(j.at("m"), j.at("p"), j.at("l"), j.at("u"), j.at("lambda"), j.at("mu"));
  auto load = [](const nlohmann::json& src, std::vector<double>& dst) {
    auto v = src.get<std::vector<double>>();
    if (v.size() != dst.size()) throw std::invalid_argument("from_json: array size mismatch");
    dst = std::move(v);
  };
  load(j.at("A0"), out.a0_.raw());
  if (j.at("B").size() != out.b_.size() || j.at("C").size() != out.c_.size())
    throw std::invalid_argument("from_json: block count mismatch");
  for (std::size_t k = 0; k < out.b_.size(); ++k) load(j["B"][k], out.b_[k].raw());
  for (std::size_t k = 0; k < out.c_.size(); ++k) load(j["C"][k], out.c_[k].raw());
  load(j.at("D"), out.d_);
  return out;
}

CB3Arrowhead cb3_multiply(const CB3Arrowhead& a, const CB3Arrowhead& b) {
  if (a.m() != b.m() || a.p() != b.p())
    throw std::invalid_argument("cb3_multiply: shape mismatch");
  SparseMatrix c = (a.sparse() * b.sparse()).pruned();
  return CB3Arrowhead::from_sparse(c, a.m());
}

CB3Arrowhead principal_section(const CB3Arrowhead& a, int n) {
  if (n <= 0 || n % a.m() != 0 || n > a.size())
    throw std::invalid_argument("principal_section: n must be a positive multiple of m");
  CB3Arrowhead s(a.m(), n / a.m() - 1, a.lower(), a.upper(), a.lambda(), a.mu());
  s.A0() = a.A0();
  for (int k = 1; k <= a.upper(); ++k) s.B(k) = a.B(k);
  for (int k = 1; k <= a.lower(); ++k) s.C(k) = a.C(k);
  for (int k = 0; k < s.p(); ++k)
    for (int d = -a.lower(); d <= a.upper(); ++d)
      for (int i = 0; i < a.m(); ++i) s.tail(i, k, d) = a.tail(i, k, d);
  return s;
}

BandedOperator principal_section(const BandedOperator& a, int n) { return a.section(n); }

// ---------------------------------------------------------------------------
// Reverse Cholesky

namespace {

[[noreturn]] void pivot_failure(int index, double pivot) {
  std::ostringstream os;
  os << "reverse_cholesky: nonpositive pivot " << pivot << " at index " << index;
  throw std::domain_error(os.str());
}

ReverseCholeskyFactor dense_reverse_cholesky(const CB3Arrowhead& a) {
  ReverseCholeskyFactor f;
  f.m = a.m();
  f.p = a.p();
  f.l = a.lower();
  f.dense_path = true;
  const Eigen::MatrixXd A = a.dense();
  const int n = static_cast<int>(A.rows());
  const double scale = A.diagonal().cwiseAbs().maxCoeff();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int k = n - 1; k >= 0; --k) {
    double s = A(k, k);
    for (int r = k + 1; r < n; ++r) s -= L(r, k) * L(r, k);
    f.factor_ops += 2 * (n - k - 1) + 1;
    if (!(s > 1e-13 * scale)) pivot_failure(k, s);
    L(k, k) = std::sqrt(s);
    for (int j = k - 1; j >= 0; --j) {
      double t = A(k, j);
      for (int r = k + 1; r < n; ++r) t -= L(r, k) * L(r, j);
      L(k, j) = t / L(k, k);
      f.factor_ops += 2 * (n - k - 1) + 1;
    }
  }
  f.dense_factor = L;
  return f;
}

}  // namespace

ReverseCholeskyFactor reverse_cholesky(const CB3Arrowhead& a) {
  if (a.lower() != a.upper() || a.lambda() + a.mu() > 1)
    throw std::invalid_argument(
        "reverse_cholesky: needs CB3(l, l; lambda, mu) with lambda + mu <= 1");
  const int m = a.m(), p = a.p(), l = a.lower();
  if (m < 3 || p < 2) return dense_reverse_cholesky(a);

  ReverseCholeskyFactor f;
  f.m = m;
  f.p = p;
  f.l = l;
  double scale = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(a.A0()(i, i)));
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(a.tail(i, k, 0)));
  const double piv_tol = 1e-13 * scale;

  // 1. Tail: m independent (l, l) banded reverse Cholesky factorisations,
  //    interlaced so the innermost loop runs over elements.
  auto T = [&](int k, int d) -> double* {
    return f.tail.data() + (static_cast<std::size_t>(k) * (l + 1) + d) * m;
  };
  f.tail.assign(static_cast<std::size_t>(p) * (l + 1) * m, 0.0);
  for (int k = p - 1; k >= 0; --k) {
    for (int j = k; j >= std::max(0, k - l); --j) {
      double* out = T(k, k - j);
      for (int i = 0; i < m; ++i) out[i] = a.tail(i, k, j - k);
      for (int r = k + 1; r <= std::min(p - 1, j + l); ++r) {
        const double* lk = T(r, r - k);
        const double* lj = T(r, r - j);
        for (int i = 0; i < m; ++i) out[i] -= lk[i] * lj[i];
        f.factor_ops += 2 * m;
      }
      if (j == k) {
        for (int i = 0; i < m; ++i) {
          if (!(out[i] > piv_tol)) pivot_failure((k + 1) * m + i, out[i]);
          out[i] = std::sqrt(out[i]);
        }
      } else {
        const double* dk = T(k, 0);
        for (int i = 0; i < m; ++i) out[i] /= dk[i];
      }
      f.factor_ops += m;
    }
  }

  // 2. M_k: B_k = sum_{j >= k} M_j L~_{jk}, solved from k = l down.
  const int kmax = std::min(l, p);
  f.M.assign(kmax, CyclicBanded());
  for (int k = kmax; k >= 1; --k) {
    CyclicBanded mk = a.B(k);
    for (int r = 0; r < m; ++r)
      for (int d = -mk.lower(); d <= mk.upper(); ++d) {
        const int i = mk.column(r, d);
        double s = mk.by_offset(r, d);
        for (int j = k + 1; j <= kmax; ++j) s -= f.M[j - 1](r, i) * T(j - 1, j - k)[i];
        mk.by_offset(r, d) = s / T(k - 1, 0)[i];
        f.factor_ops += 2 * (kmax - k) + 1;
      }
    f.M[k - 1] = mk;
  }

  // 3. Schur complement of the head.
  CyclicBanded at = a.A0();
  for (const auto& mk : f.M) {
    const CyclicBanded mm = multiply(mk, mk.transpose());
    for (int r = 0; r < m; ++r)
      for (int d = -mm.lower(); d <= mm.upper(); ++d) {
        at.at(r, mm.column(r, d)) -= mm.by_offset(r, d);
        f.factor_ops += 2;
      }
  }

  // 4. Head: Ã0 = [a11 a^T; a A0'] with A0' tridiagonal.
  const int h = m - 1;
  f.head_diag.resize(h);
  f.head_sub = Eigen::VectorXd::Zero(h);
  for (int k = h - 1; k >= 0; --k) {
    double s = at(k + 1, k + 1);
    if (k + 1 < h) s -= f.head_sub(k + 1) * f.head_sub(k + 1);
    if (!(s > piv_tol)) pivot_failure(k + 1, s);
    f.head_diag(k) = std::sqrt(s);
    if (k > 0) f.head_sub(k) = at(k + 1, k) / f.head_diag(k);
    f.factor_ops += 5;
  }
  f.v.resize(h);
  for (int k = h - 1; k >= 0; --k) {
    double s = at(k + 1, 0);
    if (k + 1 < h) s -= f.head_sub(k + 1) * f.v(k + 1);
    f.v(k) = s / f.head_diag(k);
    f.factor_ops += 3;
  }
  const double s11 = at(0, 0) - f.v.squaredNorm();
  f.factor_ops += 2 * h + 1;
  if (!(s11 > piv_tol)) pivot_failure(0, s11);
  f.l11 = std::sqrt(s11);
  return f;
}

Eigen::VectorXd solve(const ReverseCholeskyFactor& f, const Eigen::VectorXd& rhs) {
  if (rhs.size() != f.size()) throw std::invalid_argument("solve: size mismatch");
  if (f.dense_path) {
    const auto& L = f.dense_factor;
    Eigen::VectorXd y = L.transpose().triangularView<Eigen::Upper>().solve(rhs);
    f.solve_ops += 2LL * L.rows() * L.rows();
    return L.triangularView<Eigen::Lower>().solve(y);
  }
  const int m = f.m, p = f.p, l = f.l, h = m - 1;
  auto T = [&](int k, int d) -> const double* {
    return f.tail.data() + (static_cast<std::size_t>(k) * (l + 1) + d) * m;
  };
  long long ops = 0;
  Eigen::VectorXd y = rhs;

  // L^T y = b: tail first (upper banded, bottom up), then the head.
  for (int k = p - 1; k >= 0; --k) {
    double* yk = y.data() + (k + 1) * m;
    for (int r = k + 1; r <= std::min(p - 1, k + l); ++r) {
      const double* lrk = T(r, r - k);
      const double* yr = y.data() + (r + 1) * m;
      for (int i = 0; i < m; ++i) yk[i] -= lrk[i] * yr[i];
      ops += 2 * m;
    }
    const double* dk = T(k, 0);
    for (int i = 0; i < m; ++i) yk[i] /= dk[i];
    ops += m;
  }
  Eigen::VectorXd r0 = y.head(m);
  for (int k = 0; k < static_cast<int>(f.M.size()); ++k) {
    const CyclicBanded& mk = f.M[k];
    const double* yk = y.data() + (k + 1) * m;
    for (int r = 0; r < m; ++r)
      for (int d = -mk.lower(); d <= mk.upper(); ++d) {
        r0(r) -= mk.by_offset(r, d) * yk[mk.column(r, d)];
        ops += 2;
      }
  }
  for (int k = h - 1; k >= 0; --k) {
    double s = r0(k + 1);
    if (k + 1 < h) s -= f.head_sub(k + 1) * y(k + 2);
    y(k + 1) = s / f.head_diag(k);
    ops += 3;
  }
  y(0) = (r0(0) - f.v.dot(y.segment(1, h))) / f.l11;
  ops += 2 * h + 1;

  // L x = y: head, then tail top down.
  Eigen::VectorXd x(y.size());
  x(0) = y(0) / f.l11;
  for (int k = 0; k < h; ++k) {
    double s = y(k + 1) - f.v(k) * x(0);
    if (k > 0) s -= f.head_sub(k) * x(k);
    x(k + 1) = s / f.head_diag(k);
    ops += 5;
  }
  for (int k = 0; k < p; ++k) {
    double* xk = x.data() + (k + 1) * m;
    const double* yk = y.data() + (k + 1) * m;
    for (int i = 0; i < m; ++i) xk[i] = yk[i];
    if (k < static_cast<int>(f.M.size())) {
      // Block (k, 0) of L is M_k^T.
      const CyclicBanded& mk = f.M[k];
      for (int r = 0; r < m; ++r)
        for (int d = -mk.lower(); d <= mk.upper(); ++d) {
          xk[mk.column(r, d)] -= mk.by_offset(r, d) * x(r);
          ops += 2;
        }
    }
    for (int j = std::max(0, k - l); j < k; ++j) {
      const double* lkj = T(k, k - j);
      const double* xj = x.data() + (j + 1) * m;
      for (int i = 0; i < m; ++i) xk[i] -= lkj[i] * xj[i];
      ops += 2 * m;
    }
    const double* dk = T(k, 0);
    for (int i = 0; i < m; ++i) xk[i] /= dk[i];
    ops += m;
  }
  f.solve_ops += ops;
  return x;
}

Eigen::MatrixXd ReverseCholeskyFactor::dense_L() const {
  if (dense_path) return dense_factor;
  Eigen::MatrixXd L = L1().dense();
  L.topLeftCorner(m, m) += L2_block();
  return L;
}

CB3Arrowhead ReverseCholeskyFactor::L1() const {
  if (dense_path) throw std::logic_error("L1: factor was computed densely");
  CB3Arrowhead out(m, p, l, 0, 1, 1);
  for (int k = 0; k < m - 1; ++k) {
    out.A0().at(k + 1, k + 1) = head_diag(k);
    if (k > 0) out.A0().at(k + 1, k) = head_sub(k);
  }
  for (int k = 1; k <= static_cast<int>(M.size()); ++k) {
    const CyclicBanded mt = M[k - 1].transpose();
    for (int r = 0; r < m; ++r)
      for (int d = -mt.lower(); d <= mt.upper(); ++d)
        out.C(k).at(r, mt.column(r, d)) += mt.by_offset(r, d);
  }
  for (int k = 0; k < p; ++k)
    for (int d = 0; d <= l && d <= k; ++d)
      for (int i = 0; i < m; ++i)
        out.tail(i, k, -d) = tail[(static_cast<std::size_t>(k) * (l + 1) + d) * m + i];
  return out;
}

Eigen::MatrixXd ReverseCholeskyFactor::L2_block() const {
  if (dense_path) throw std::logic_error("L2_block: factor was computed densely");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  b(0, 0) = l11;
  b.col(0).tail(m - 1) = v;
  return b;
}

}  // namespace arcsem
