#include "obstrukt/exactlin.hpp"

#include <sstream>

namespace obstrukt {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw std::domain_error("non-integral matrix entry");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

RatVector to_rational(const IntVector& v) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

IntVector to_integer(const RatVector& v) {
  IntVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw std::domain_error("non-integral vector entry");
    r[i] = v[i].get_num();
  }
  return r;
}

bool is_integral(const RatVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

template <class T>
static std::string render(const Matrix<T>& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string to_string(const IntMatrix& m) { return render(m); }
std::string to_string(const RatMatrix& m) { return render(m); }

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SmithWork {
  IntMatrix A, U, V;

  void row_swap(std::size_t a, std::size_t b) {
    A.swap_rows(a, b);
    U.swap_rows(a, b);
  }
  void col_swap(std::size_t a, std::size_t b) {
    A.swap_cols(a, b);
    V.swap_cols(a, b);
  }
  void row_add(std::size_t dst, std::size_t src, const BigInt& c) {
    A.add_row(dst, src, c);
    U.add_row(dst, src, c);
  }
  void col_add(std::size_t dst, std::size_t src, const BigInt& c) {
    A.add_col(dst, src, c);
    V.add_col(dst, src, c);
  }
};

}  // namespace

SmithResult smith(const IntMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  SmithWork w{m, IntMatrix::identity(R), IntMatrix::identity(C)};
  IntMatrix& A = w.A;
  std::size_t t = 0;
  while (t < R && t < C) {
    // Global smallest pivot in the trailing block.
    std::size_t pi = R, pj = C;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (A(i, j) != 0 && (pi == R || abs(A(i, j)) < abs(A(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == R) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (A(i, t) == 0) continue;
        BigInt q = A(i, t) / A(t, t);
        w.row_add(i, t, -q);
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (A(t, j) == 0) continue;
        BigInt q = A(t, j) / A(t, t);
        w.col_add(j, t, -q);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Bring the smallest remainder in row/column t to the pivot.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < R; ++i)
          if (A(i, t) != 0 && abs(A(i, t)) < abs(A(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < C; ++j)
          if (A(t, j) != 0 && abs(A(t, j)) < abs(A(bi, bj))) bi = t, bj = j;
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        continue;
      }
      // Divisibility: fold an offending row into row t and reduce again.
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (A(i, j) % A(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == R) break;
      w.row_add(t, bad, 1);
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      w.U.negate_row(t);
    }
    ++t;
  }
  return SmithResult{std::move(w.U), std::move(w.A), std::move(w.V), t};
}

// ---------------------------------------------------------------------------
// FGAbelian

RatVector FGAbelian::normalize(const RatVector& coords) const {
  if (coords.size() != ngens()) throw DimensionMismatch("coordinate length");
  RatVector out = coords;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (out[i].get_den() != 1) throw std::domain_error("torsion coordinate not integral");
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), out[i].get_num_mpz_t(), torsion[i].get_mpz_t());
    out[i] = r;
  }
  return out;
}

bool FGAbelian::is_zero(const RatVector& coords) const {
  for (const auto& x : normalize(coords))
    if (x != 0) return false;
  return true;
}

RatVector FGAbelian::coordinates_of(const RatVector& ambient) const {
  if (!project) throw std::logic_error("presentation has no projection");
  return normalize(project->apply(ambient));
}

RatVector FGAbelian::representative(const RatVector& coords) const {
  if (!lift) throw std::logic_error("presentation has no lift");
  return lift->apply(coords);
}

std::string FGAbelian::describe() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  if (free_rank) {
    os << (first ? "" : " + ") << "Z";
    if (free_rank > 1) os << "^" << free_rank;
  }
  return os.str();
}

Order element_order(const RatVector& x, const FGAbelian& g) {
  RatVector c = g.normalize(x);
  Order o;
  for (std::size_t i = g.torsion.size(); i < c.size(); ++i)
    if (c[i] != 0) {
      o.infinite = true;
      return o;
    }
  for (std::size_t i = 0; i < g.torsion.size(); ++i) {
    BigInt ci = c[i].get_num();
    BigInt gg = gcd(ci, g.torsion[i]);
    BigInt oi = g.torsion[i] / gg;
    o.value = lcm(o.value, oi);
  }
  return o;
}

// ---------------------------------------------------------------------------
// Rational elimination

RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots) {
  RatMatrix a = m;
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && a(i, c) != 0) {
        Rational f = a(i, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
      }
    piv.push_back(c);
    ++r;
  }
  if (pivots) *pivots = std::move(piv);
  return a;
}

std::size_t rank_q(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

RatMatrix kernel_basis_q(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  RatMatrix e = rref(m, &piv);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<RatVector> cols;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    RatVector v(m.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -e(k, f);
    cols.push_back(std::move(v));
  }
  return RatMatrix::from_columns(m.cols(), cols);
}

RatMatrix image_basis_q(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return m.select_cols(piv);
}

std::optional<RatVector> solve_q(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_q rhs");
  RatMatrix aug = m.hcat(RatMatrix::from_columns(m.rows(), {b}));
  std::vector<std::size_t> piv;
  RatMatrix e = rref(aug, &piv);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  RatVector x(m.cols());
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = e(k, m.cols());
  return x;
}

std::optional<RatMatrix> inverse_q(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug = m.hcat(RatMatrix::identity(n));
  std::vector<std::size_t> piv;
  RatMatrix e = rref(aug, &piv);
  if (piv.size() < n || (n && piv[n - 1] != n - 1)) return std::nullopt;
  std::vector<std::size_t> right(n);
  for (std::size_t j = 0; j < n; ++j) right[j] = n + j;
  return e.select_cols(right);
}

RatMatrix left_inverse_q(const RatMatrix& m) {
  // Invert an independent set of rows; zero elsewhere.
  std::vector<std::size_t> rows;
  rref(m.transpose(), &rows);
  if (rows.size() != m.cols()) throw std::domain_error("left inverse needs independent columns");
  auto sq = inverse_q(m.select_rows(rows));
  RatMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t k = 0; k < rows.size(); ++k) out(i, rows[k]) = (*sq)(i, k);
  return out;
}

// ---------------------------------------------------------------------------
// Integer kernels, images, solving

IntMatrix kernel_basis(const IntMatrix& m) {
  SmithResult s = smith(m);
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < m.cols(); ++j) idx.push_back(j);
  return s.V.select_cols(idx);
}

static IntMatrix unimodular_inverse(const IntMatrix& u) {
  auto inv = inverse_q(to_rational(u));
  if (!inv) throw std::logic_error("singular unimodular matrix");
  return to_integer(*inv);
}

IntMatrix image_basis(const IntMatrix& m) {
  SmithResult s = smith(m);
  IntMatrix uinv = unimodular_inverse(s.U);
  IntMatrix out(m.rows(), s.rank);
  for (std::size_t j = 0; j < s.rank; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = uinv(i, j) * s.D(j, j);
  return out;
}

std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_integer rhs");
  SmithResult s = smith(m);
  IntVector c = s.U.apply(b);
  IntVector y(m.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < s.rank) {
      if (c[i] % s.D(i, i) != 0) return std::nullopt;
      y[i] = c[i] / s.D(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V.apply(y);
}

BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        a(i, j) = v / prev;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Presentations

FGAbelian cokernel(const IntMatrix& m) {
  return subquotient(m.rows(), IntMatrix::identity(m.rows()), m);
}

FGAbelian subquotient(std::size_t ambient_rank, const IntMatrix& Z, const IntMatrix& B) {
  if (Z.rows() != ambient_rank || B.rows() != ambient_rank)
    throw DimensionMismatch("subquotient generator length");
  IntMatrix zb = image_basis(Z);
  const std::size_t k = zb.cols();
  RatMatrix zq = to_rational(zb);
  RatMatrix zinv = k ? left_inverse_q(zq) : RatMatrix(0, ambient_rank);

  // Coordinates of B in the Z basis.
  IntMatrix coeff(k, B.cols());
  if (k) {
    RatMatrix bq = to_rational(B);
    RatMatrix cq = zinv * bq;
    if (!(zq * cq == bq)) throw ContainmentViolation("boundary generators not contained in cycles");
    try {
      coeff = to_integer(cq);
    } catch (const std::domain_error&) {
      throw ContainmentViolation("boundary generators not in the cycle lattice");
    }
  } else if (!B.is_zero()) {
    throw ContainmentViolation("nonzero boundaries in zero cycle group");
  }

  SmithResult s = smith(coeff);
  IntMatrix uinv = unimodular_inverse(s.U);
  std::vector<std::size_t> keep;
  FGAbelian g;
  for (std::size_t i = 0; i < k; ++i) {
    if (i < s.rank) {
      if (s.D(i, i) == 1) continue;
      g.torsion.push_back(s.D(i, i));
    } else {
      ++g.free_rank;
    }
    keep.push_back(i);
  }
  g.lift = to_rational(zb * uinv.select_cols(keep));
  g.project = to_rational(s.U.select_rows(keep)) * zinv;
  return g;
}

FGAbelian subquotient_q(std::size_t ambient_rank, const RatMatrix& Z, const RatMatrix& B) {
  if (Z.rows() != ambient_rank || B.rows() != ambient_rank)
    throw DimensionMismatch("subquotient generator length");
  RatMatrix zb = image_basis_q(Z);
  const std::size_t k = zb.cols();
  RatMatrix zinv = k ? left_inverse_q(zb) : RatMatrix(0, ambient_rank);
  RatMatrix coeff = zinv * B;
  if (!(zb * coeff == B)) throw ContainmentViolation("boundary space not contained in cycle space");

  RatMatrix cb = image_basis_q(coeff);
  std::vector<std::size_t> piv;
  rref(cb.transpose(), &piv);
  std::vector<bool> used(k, false);
  for (auto p : piv) used[p] = true;
  std::vector<RatVector> comp;
  for (std::size_t j = 0; j < k; ++j)
    if (!used[j]) {
      RatVector e(k);
      e[j] = 1;
      comp.push_back(std::move(e));
    }
  RatMatrix w = RatMatrix::from_columns(k, comp);
  RatMatrix full = cb.hcat(w);
  auto finv = inverse_q(full);
  std::vector<std::size_t> tail;
  for (std::size_t i = cb.cols(); i < k; ++i) tail.push_back(i);

  FGAbelian g;
  g.free_rank = comp.size();
  g.lift = zb * w;
  g.project = finv->select_rows(tail) * zinv;
  return g;
}

}  // namespace obstrukt
