#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "wba/permutation.hpp"
#include "wba/util.hpp"

namespace wba {

// Dense operator on (C^d)^(tensor n). Row/column indices are base-d digit
// strings with slot 1 as the most significant digit.
template <typename Scalar>
struct BasicOperator {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int d = 0;  // local dimension
  int n = 0;  // number of slots
  Matrix m;

  BasicOperator() = default;
  BasicOperator(int d_, int n_, Matrix mat) : d(d_), n(n_), m(std::move(mat)) {
    if (m.rows() != dim() || m.cols() != dim()) throw std::invalid_argument("matrix size mismatch");
  }

  std::int64_t dim() const { return ipow(d, n); }

  static BasicOperator zero(int d, int n) {
    return BasicOperator(d, n, Matrix::Zero(ipow(d, n), ipow(d, n)));
  }
  static BasicOperator identity(int d, int n) {
    return BasicOperator(d, n, Matrix::Identity(ipow(d, n), ipow(d, n)));
  }

  Scalar trace() const { return m.trace(); }

  std::int64_t stride(int slot) const { return ipow(d, n - slot); }
  int digit(std::int64_t index, int slot) const {
    return static_cast<int>((index / stride(slot)) % d);
  }
};

using DenseOperator = BasicOperator<std::complex<double>>;

namespace detail {
template <typename Scalar>
void require_same_shape(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  if (a.d != b.d || a.n != b.n) throw std::invalid_argument("operator shape mismatch");
}
}  // namespace detail

template <typename Scalar>
BasicOperator<Scalar> operator+(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return {a.d, a.n, a.m + b.m};
}

template <typename Scalar>
BasicOperator<Scalar> operator-(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return {a.d, a.n, a.m - b.m};
}

template <typename Scalar>
BasicOperator<Scalar> operator*(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return {a.d, a.n, a.m * b.m};
}

template <typename Scalar, typename Number>
BasicOperator<Scalar> operator*(Number c, const BasicOperator<Scalar>& a) {
  return {a.d, a.n, Scalar(c) * a.m};
}

template <typename Scalar>
BasicOperator<Scalar> adjoint(const BasicOperator<Scalar>& a) {
  return {a.d, a.n, a.m.adjoint()};
}

// Frobenius pairing <A,B> = Tr(A^dagger B).
template <typename Scalar>
Scalar frobenius(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return a.m.conjugate().cwiseProduct(b.m).sum();
}

// Tr(A B) without forming the product.
template <typename Scalar>
Scalar product_trace(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return a.m.cwiseProduct(b.m.transpose()).sum();
}

template <typename Scalar>
double max_abs(const BasicOperator<Scalar>& a) {
  return a.m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
double max_abs_dev(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  return (a.m - b.m).cwiseAbs().maxCoeff();
}

template <typename Scalar>
BasicOperator<Scalar> kron(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  if (a.d != b.d) throw std::invalid_argument("local dimension mismatch");
  std::int64_t na = a.dim(), nb = b.dim();
  typename BasicOperator<Scalar>::Matrix m(na * nb, na * nb);
  for (std::int64_t i = 0; i < na; ++i)
    for (std::int64_t j = 0; j < na; ++j) m.block(i * nb, j * nb, nb, nb) = a.m(i, j) * b.m;
  return {a.d, a.n + b.n, std::move(m)};
}

// Operator permuting tensor slots: the output digit at slot k is the input
// digit at slot sigma^{-1}(k). A permutation on fewer letters than n acts on
// the leading slots and fixes the rest.
template <typename Scalar = std::complex<double>>
BasicOperator<Scalar> perm_operator(const Permutation& sigma, int d, int n) {
  if (sigma.degree() > n) throw std::invalid_argument("slot mismatch");
  BasicOperator<Scalar> out = BasicOperator<Scalar>::zero(d, n);
  std::int64_t N = out.dim();
  for (std::int64_t in = 0; in < N; ++in) {
    std::int64_t target = 0;
    for (int j = 1; j <= n; ++j) {
      int image = j <= sigma.degree() ? sigma(j) : j;
      target += static_cast<std::int64_t>(out.digit(in, j)) * out.stride(image);
    }
    out.m(target, in) = Scalar(1);
  }
  return out;
}

// Transposes the listed slots between row and column indices.
template <typename Scalar>
BasicOperator<Scalar> partial_transpose(const BasicOperator<Scalar>& x,
                                        const std::vector<int>& slots) {
  for (int s : slots)
    if (s < 1 || s > x.n) throw std::invalid_argument("slot out of range");
  BasicOperator<Scalar> out = BasicOperator<Scalar>::zero(x.d, x.n);
  std::int64_t N = x.dim();
  for (std::int64_t r = 0; r < N; ++r)
    for (std::int64_t c = 0; c < N; ++c) {
      std::int64_t rr = r, cc = c;
      for (int s : slots) {
        std::int64_t st = x.stride(s);
        int dr = x.digit(r, s), dc = x.digit(c, s);
        rr += static_cast<std::int64_t>(dc - dr) * st;
        cc += static_cast<std::int64_t>(dr - dc) * st;
      }
      out.m(rr, cc) = x.m(r, c);
    }
  return out;
}

// Traces out the listed slots; the remaining slots keep their relative order.
// Tracing every slot leaves a 1x1 operator holding the full trace.
template <typename Scalar>
BasicOperator<Scalar> partial_trace(const BasicOperator<Scalar>& x, const std::vector<int>& slots) {
  std::vector<bool> traced(x.n + 1, false);
  for (int s : slots) {
    if (s < 1 || s > x.n) throw std::invalid_argument("slot out of range");
    traced[s] = true;
  }
  std::vector<int> kept;
  for (int s = 1; s <= x.n; ++s)
    if (!traced[s]) kept.push_back(s);

  int nk = static_cast<int>(kept.size());
  int nt = x.n - nk;
  BasicOperator<Scalar> out = BasicOperator<Scalar>::zero(x.d, nk);
  std::int64_t keptN = out.dim(), tracedN = ipow(x.d, nt);

  // Offsets contributed by the traced digits (identical on rows and columns).
  std::vector<std::int64_t> offs(tracedN, 0);
  {
    std::vector<int> tslots;
    for (int s = 1; s <= x.n; ++s)
      if (traced[s]) tslots.push_back(s);
    for (std::int64_t t = 0; t < tracedN; ++t) {
      std::int64_t rem = t, off = 0;
      for (int i = nt - 1; i >= 0; --i) {
        off += (rem % x.d) * x.stride(tslots[i]);
        rem /= x.d;
      }
      offs[t] = off;
    }
  }

  auto lift = [&](std::int64_t packed) {
    std::int64_t off = 0, rem = packed;
    for (int i = nk - 1; i >= 0; --i) {
      off += (rem % x.d) * x.stride(kept[i]);
      rem /= x.d;
    }
    return off;
  };

  for (std::int64_t ro = 0; ro < keptN; ++ro) {
    std::int64_t base_r = lift(ro);
    for (std::int64_t co = 0; co < keptN; ++co) {
      std::int64_t base_c = lift(co);
      Scalar acc(0);
      for (std::int64_t t = 0; t < tracedN; ++t) acc += x.m(base_r + offs[t], base_c + offs[t]);
      out.m(ro, co) = acc;
    }
  }
  return out;
}

// Places x on the listed global slots (x slot j goes to slots[j-1]) and acts
// as identity elsewhere. The slot list may be in any order.
template <typename Scalar>
BasicOperator<Scalar> embed(const BasicOperator<Scalar>& x, int n, const std::vector<int>& slots) {
  if (static_cast<int>(slots.size()) != x.n) throw std::invalid_argument("size mismatch");
  std::vector<bool> used(n + 1, false);
  for (int s : slots) {
    if (s < 1 || s > n || used[s]) throw std::invalid_argument("bad embedding slots");
    used[s] = true;
  }
  BasicOperator<Scalar> out = BasicOperator<Scalar>::zero(x.d, n);
  std::int64_t N = out.dim();
  std::vector<int> rest;
  for (int s = 1; s <= n; ++s)
    if (!used[s]) rest.push_back(s);

  for (std::int64_t R = 0; R < N; ++R) {
    std::int64_t xr = 0;
    for (int j = 1; j <= x.n; ++j)
      xr += static_cast<std::int64_t>(out.digit(R, slots[j - 1])) * x.stride(j);
    for (std::int64_t C = 0; C < N; ++C) {
      bool diag = true;
      for (int s : rest)
        if (out.digit(R, s) != out.digit(C, s)) {
          diag = false;
          break;
        }
      if (!diag) continue;
      std::int64_t xc = 0;
      for (int j = 1; j <= x.n; ++j)
        xc += static_cast<std::int64_t>(out.digit(C, slots[j - 1])) * x.stride(j);
      out.m(R, C) = x.m(xr, xc);
    }
  }
  return out;
}

// Rank-one projector onto (1/sqrt(d)) sum_i |ii> on two slots.
template <typename Scalar = std::complex<double>>
BasicOperator<Scalar> max_entangled_projector(int d) {
  if (d < 1) throw std::invalid_argument("local dimension must be positive");
  BasicOperator<Scalar> out = BasicOperator<Scalar>::zero(d, 2);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) out.m(i * d + i, k * d + k) = Scalar(1.0 / d);
  return out;
}

// Sum over all index pairs of A(r,c) * B(reverse(r), reverse(c)), where
// reverse flips the digit string. This evaluates the trace of A (x) B against
// the operator arcing every slot of A with the mirror slot of B.
template <typename Scalar>
Scalar reversal_pairing_trace(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
  detail::require_same_shape(a, b);
  std::int64_t N = a.dim();
  std::vector<std::int64_t> rev(N);
  for (std::int64_t i = 0; i < N; ++i) {
    std::int64_t r = 0;
    for (int s = 1; s <= a.n; ++s) r += static_cast<std::int64_t>(a.digit(i, s)) * a.stride(a.n + 1 - s);
    rev[i] = r;
  }
  Scalar acc(0);
  for (std::int64_t r = 0; r < N; ++r)
    for (std::int64_t c = 0; c < N; ++c) acc += a.m(r, c) * b.m(rev[r], rev[c]);
  return acc;
}

}  // namespace wba
