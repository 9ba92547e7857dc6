// Copyright 2026 The twirlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twirlkit/numerics.hpp"

namespace twirlkit {

inline constexpr int kMaxQubits = 5;

inline void require_qubits(int n, int max_qubits, const char* who) {
  if (n < 1 || n > max_qubits) {
    throw CapacityError(std::string(who) + ": qubit count " + std::to_string(n) +
                        " outside [1, " + std::to_string(max_qubits) + "]");
  }
}

inline std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }
inline Index pow2(int n) { return Index{1} << n; }

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor-product label over {I, X, Y, Z}.
///
/// Index order is base-4 with I=0, X=1, Y=2, Z=3 and the leftmost letter most
/// significant, so "IZ" -> 3 and "XI" -> 4.
class PauliString {
 public:
  explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw DomainError("PauliString: empty");
  }

  static PauliString parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'I': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
          throw DomainError("PauliString: invalid letter '" + std::string(1, c) + "' in \"" +
                            std::string(text) + "\"");
      }
    }
    return PauliString(std::move(letters));
  }

  static PauliString from_index(int n, std::size_t index) {
    if (n < 1) throw DomainError("PauliString: qubit count must be positive");
    if (index >= pow4(n)) throw DomainError("PauliString: index out of range");
    std::vector<Pauli> letters(static_cast<std::size_t>(n));
    for (int q = n - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(index & 3u);
      index >>= 2;
    }
    return PauliString(std::move(letters));
  }

  static PauliString identity(int n) { return from_index(n, 0); }

  int size() const noexcept { return static_cast<int>(letters_.size()); }
  Pauli operator[](int q) const { return letters_.at(static_cast<std::size_t>(q)); }
  const std::vector<Pauli>& letters() const noexcept { return letters_; }

  std::size_t index() const noexcept {
    std::size_t idx = 0;
    for (Pauli p : letters_) idx = (idx << 2) | static_cast<std::size_t>(p);
    return idx;
  }

  std::string str() const {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    out.reserve(letters_.size());
    for (Pauli p : letters_) out.push_back(kLetters[static_cast<int>(p)]);
    return out;
  }

  bool is_identity() const noexcept { return index() == 0; }

  /// Strings anti-commute iff an odd number of positions hold distinct non-identity letters.
  bool anticommutes_with(const PauliString& other) const {
    if (other.size() != size()) throw DimensionError("PauliString: length mismatch");
    int count = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
      const Pauli a = letters_[q];
      const Pauli b = other.letters_[q];
      if (a != Pauli::I && b != Pauli::I && a != b) ++count;
    }
    return count % 2 == 1;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
};

inline ComplexMatrix single_qubit_pauli(Pauli p) {
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -kI, kI, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

/// Unnormalized 2^n x 2^n tensor product, leftmost letter on the most significant qubit.
inline ComplexMatrix pauli_matrix(const PauliString& p) {
  ComplexMatrix out = single_qubit_pauli(p[0]);
  for (int q = 1; q < p.size(); ++q) out = kron(out, single_qubit_pauli(p[q]));
  return out;
}

/// Lowering operator |0><1|; |1> is the excited state.
inline ComplexMatrix sigma_minus() {
  ComplexMatrix m = zeros(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

/// Places a single-qubit operator on qubit `q` (0 = leftmost) of an n-qubit register.
inline ComplexMatrix embed(const ComplexMatrix& op, int q, int n) {
  if (op.rows() != 2 || op.cols() != 2) throw DimensionError("embed: expects a 2x2 operator");
  if (q < 0 || q >= n) throw DomainError("embed: qubit index out of range");
  ComplexMatrix out = q == 0 ? op : identity(2);
  for (int k = 1; k < n; ++k) out = kron(out, k == q ? op : identity(2));
  return out;
}

/// Orthonormal Hermitian operator basis G_a = P_a / sqrt(2^n), tr(G_a G_b) = delta_ab.
struct HermitianBasis {
  int n = 0;
  std::vector<ComplexMatrix> elements;

  std::size_t size() const noexcept { return elements.size(); }
  const ComplexMatrix& operator[](std::size_t a) const { return elements[a]; }

  /// Coefficients r_a = tr(G_a M).
  ComplexVector coefficients(const ComplexMatrix& m) const {
    ComplexVector r(static_cast<Index>(elements.size()));
    for (std::size_t a = 0; a < elements.size(); ++a) {
      // tr(G M) without forming the product.
      r(static_cast<Index>(a)) = (elements[a].transpose().cwiseProduct(m)).sum();
    }
    return r;
  }

  ComplexMatrix synthesize(const ComplexVector& r) const {
    const Index dim = pow2(n);
    ComplexMatrix out = zeros(dim, dim);
    for (std::size_t a = 0; a < elements.size(); ++a) {
      out += r(static_cast<Index>(a)) * elements[a];
    }
    return out;
  }
};

inline HermitianBasis hermitian_basis(int n) {
  require_qubits(n, kMaxQubits, "hermitian_basis");
  HermitianBasis basis;
  basis.n = n;
  const double norm = 1.0 / std::sqrt(static_cast<double>(pow2(n)));
  basis.elements.reserve(pow4(n));
  for (std::size_t a = 0; a < pow4(n); ++a) {
    basis.elements.push_back(norm * pauli_matrix(PauliString::from_index(n, a)));
  }
  return basis;
}

/// Outer-product basis tau_e = |e1><e2| with e = e1 * 2^n + e2 (row-major).
struct TauBasis {
  int n = 0;
  std::vector<ComplexMatrix> elements;

  std::size_t size() const noexcept { return elements.size(); }
  const ComplexMatrix& operator[](std::size_t e) const { return elements[e]; }

  Index row(std::size_t e) const { return static_cast<Index>(e) / pow2(n); }
  Index col(std::size_t e) const { return static_cast<Index>(e) % pow2(n); }
};

inline TauBasis tau_basis(int n) {
  require_qubits(n, kMaxQubits, "tau_basis");
  TauBasis basis;
  basis.n = n;
  const Index dim = pow2(n);
  basis.elements.reserve(pow4(n));
  for (Index e1 = 0; e1 < dim; ++e1) {
    for (Index e2 = 0; e2 < dim; ++e2) {
      ComplexMatrix tau = zeros(dim, dim);
      tau(e1, e2) = 1.0;
      basis.elements.push_back(std::move(tau));
    }
  }
  return basis;
}

}  // namespace twirlkit
