#include "mrem/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace mrem {

namespace {

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Pauli code per qubit: 0 = I, 1 = X, 2 = Y, 3 = Z.
inline int pauli_code(std::uint64_t x, std::uint64_t z, int q) {
  const int xb = static_cast<int>((x >> q) & 1);
  const int zb = static_cast<int>((z >> q) & 1);
  return xb && zb ? 2 : (xb ? 1 : (zb ? 3 : 0));
}

// Exponent k in sigma_a * sigma_b = i^k sigma_{a xor b} for single-qubit
// factors; rows/cols indexed by the code above.
constexpr int kPhaseExp[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},  // X*X=I, X*Y=iZ, X*Z=-iY
    {0, 3, 0, 1},  // Y*X=-iZ, Y*Z=iX
    {0, 1, 3, 0},  // Z*X=iY, Z*Y=-iX
};

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

void check_width(int n) {
  if (n <= 0 || n > kMaxLabelQubits) throw DimensionError("qubit count out of range");
}

}  // namespace

PauliTerm PauliTerm::identity(int n_qubits, Complex coeff) {
  check_width(n_qubits);
  return PauliTerm{n_qubits, 0, 0, coeff};
}

PauliTerm PauliTerm::from_label(const std::string& label, Complex coeff) {
  check_width(static_cast<int>(label.size()));
  PauliTerm t;
  t.n_qubits = static_cast<int>(label.size());
  t.coeff = coeff;
  for (int i = 0; i < t.n_qubits; ++i) {
    const int q = t.n_qubits - 1 - i;  // rightmost character is qubit 0
    switch (label[static_cast<std::size_t>(i)]) {
      case 'I':
        break;
      case 'X':
        t.x_mask |= std::uint64_t{1} << q;
        break;
      case 'Y':
        t.x_mask |= std::uint64_t{1} << q;
        t.z_mask |= std::uint64_t{1} << q;
        break;
      case 'Z':
        t.z_mask |= std::uint64_t{1} << q;
        break;
      default:
        throw ParseError(std::string("invalid Pauli character '") +
                         label[static_cast<std::size_t>(i)] + "'");
    }
  }
  return t;
}

std::string PauliTerm::label() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = n_qubits - 1; q >= 0; --q) {
    static constexpr char kChars[4] = {'I', 'X', 'Y', 'Z'};
    s.push_back(kChars[pauli_code(x_mask, z_mask, q)]);
  }
  return s;
}

bool PauliTerm::commutes_with(const PauliTerm& other) const {
  return (parity(x_mask & other.z_mask) ^ parity(z_mask & other.x_mask)) == 0;
}

void PauliTerm::validate() const {
  check_width(n_qubits);
  const std::uint64_t allowed =
      n_qubits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;
  if ((x_mask & ~allowed) || (z_mask & ~allowed))
    throw DimensionError("mask bits beyond register width");
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("Pauli width mismatch");
  int k = 0;
  std::uint64_t active = (a.x_mask | a.z_mask) & (b.x_mask | b.z_mask);
  while (active) {
    const int q = std::countr_zero(active);
    active &= active - 1;
    k += kPhaseExp[pauli_code(a.x_mask, a.z_mask, q)][pauli_code(b.x_mask, b.z_mask, q)];
  }
  PauliTerm out;
  out.n_qubits = a.n_qubits;
  out.x_mask = a.x_mask ^ b.x_mask;
  out.z_mask = a.z_mask ^ b.z_mask;
  out.coeff = a.coeff * b.coeff * kIPow[k & 3];
  return out;
}

void PauliSum::add_term(PauliTerm term) {
  if (terms.empty() && n_qubits == 0) n_qubits = term.n_qubits;
  if (term.n_qubits != n_qubits) throw DimensionError("term width mismatch");
  term.validate();
  terms.push_back(term);
}

void PauliSum::normalize() {
  std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> merged;
  for (const auto& t : terms) merged[{t.z_mask, t.x_mask}] += t.coeff;
  terms.clear();
  for (const auto& [masks, coeff] : merged) {
    if (std::abs(coeff) < kCoeffCutoff) continue;
    terms.push_back(PauliTerm{n_qubits, masks.second, masks.first, coeff});
  }
}

bool PauliSum::is_hermitian(double tol) const {
  PauliSum copy = *this;
  copy.normalize();
  for (const auto& t : copy.terms)
    if (std::abs(t.coeff.imag()) > tol) return false;
  return true;
}

double PauliSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, std::abs(t.coeff));
  return m;
}

double PauliSum::coeff_one_norm() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.coeff);
  return s;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (terms.empty() && n_qubits == 0) n_qubits = other.n_qubits;
  if (other.n_qubits != n_qubits) throw DimensionError("sum width mismatch");
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  normalize();
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scale) {
  for (auto& t : terms) t.coeff *= scale;
  normalize();
  return *this;
}

PauliSum operator+(PauliSum a, const PauliSum& b) {
  a += b;
  return a;
}

PauliSum operator*(Complex scale, PauliSum a) {
  a *= scale;
  return a;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("sum width mismatch");
  PauliSum out(a.n_qubits);
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) out.terms.push_back(multiply(ta, tb));
  out.normalize();
  return out;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  PauliSum out = multiply(a, b);
  out += Complex{-1.0, 0.0} * multiply(b, a);
  return out;
}

bool equal(const PauliSum& a, const PauliSum& b, double tol) {
  if (a.n_qubits != b.n_qubits) return false;
  PauliSum diff = a;
  diff += Complex{-1.0, 0.0} * PauliSum(b);
  for (const auto& t : diff.terms)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

PauliSum parse_pauli_sum(std::istream& in) {
  PauliSum sum;
  std::string line;
  int line_no = 0;
  int label_len = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError("expected `coeff_re [coeff_im] LABEL`", line_no);
    double re = 0.0, im = 0.0;
    try {
      std::size_t used = 0;
      re = std::stod(tokens[0], &used);
      if (used != tokens[0].size()) throw std::invalid_argument("");
      if (tokens.size() == 3) {
        im = std::stod(tokens[1], &used);
        if (used != tokens[1].size()) throw std::invalid_argument("");
      }
    } catch (const std::exception&) {
      throw ParseError("non-numeric coefficient", line_no);
    }
    const std::string& label = tokens.back();
    if (label_len == 0) {
      label_len = static_cast<int>(label.size());
      sum.n_qubits = label_len;
    } else if (static_cast<int>(label.size()) != label_len) {
      throw ParseError("inconsistent label length", line_no);
    }
    PauliTerm term;
    try {
      term = PauliTerm::from_label(label, Complex{re, im});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    sum.terms.push_back(term);
  }
  sum.normalize();
  return sum;
}

PauliSum parse_pauli_sum(const std::string& text) {
  std::istringstream in(text);
  return parse_pauli_sum(in);
}

PauliSum read_pauli_sum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_pauli_sum(in);
}

std::string serialize(const PauliSum& sum) {
  PauliSum copy = sum;
  copy.normalize();
  std::string out;
  char buf[128];
  for (const auto& t : copy.terms) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %s\n", t.coeff.real(), t.coeff.imag(),
                  t.label().c_str());
    out += buf;
  }
  return out;
}

void write_pauli_sum_file(const PauliSum& sum, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize(sum);
}

namespace {

// P|j> = i^{#Y} (-1)^{popcount(j & z)} |j xor x>; column j has one entry.
inline Complex column_phase(const PauliTerm& t, std::uint64_t j) {
  const int ny = std::popcount(t.x_mask & t.z_mask);
  const int sign = parity(j & t.z_mask);
  Complex phase = kIPow[ny & 3];
  return sign ? -phase : phase;
}

void check_dense_capacity(const PauliSum& sum) {
  if (sum.n_qubits > kMaxDenseQubits)
    throw CapacityError("dense realization limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits");
  if (sum.n_qubits <= 0) throw DimensionError("empty register");
}

}  // namespace

Eigen::MatrixXcd to_dense(const PauliSum& sum) {
  check_dense_capacity(sum);
  const std::int64_t dim = std::int64_t{1} << sum.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : sum.terms) {
    for (std::int64_t j = 0; j < dim; ++j) {
      const auto ju = static_cast<std::uint64_t>(j);
      m(static_cast<Eigen::Index>(ju ^ t.x_mask), j) += t.coeff * column_phase(t, ju);
    }
  }
  return m;
}

double expectation(const PauliSum& h, const Eigen::VectorXcd& amplitudes) {
  const std::int64_t dim = amplitudes.size();
  Complex acc = 0.0;
  for (const auto& t : h.terms) {
    Complex term_acc = 0.0;
    for (std::int64_t j = 0; j < dim; ++j) {
      const auto ju = static_cast<std::uint64_t>(j);
      term_acc += std::conj(amplitudes(static_cast<Eigen::Index>(ju ^ t.x_mask))) *
                  column_phase(t, ju) * amplitudes(j);
    }
    acc += t.coeff * term_acc;
  }
  const double scale = std::max(1.0, h.coeff_one_norm());
  if (std::abs(acc.imag()) > 1e-10 * scale)
    throw ContractError("expectation has a non-negligible imaginary residue");
  return acc.real();
}

double expectation(const PauliSum& h, const Eigen::MatrixXcd& density) {
  const std::int64_t dim = density.rows();
  Complex acc = 0.0;
  for (const auto& t : h.terms) {
    Complex term_acc = 0.0;
    for (std::int64_t j = 0; j < dim; ++j) {
      const auto ju = static_cast<std::uint64_t>(j);
      term_acc += density(j, static_cast<Eigen::Index>(ju ^ t.x_mask)) * column_phase(t, ju);
    }
    acc += t.coeff * term_acc;
  }
  const double scale = std::max(1.0, h.coeff_one_norm());
  if (std::abs(acc.imag()) > 1e-10 * scale)
    throw ContractError("expectation has a non-negligible imaginary residue");
  return acc.real();
}

double expectation(const PauliSum& h, const QuantumState& psi) {
  if (h.n_qubits != psi.n_qubits) throw DimensionError("operator/state width mismatch");
  if (!h.is_hermitian()) throw ContractError("expectation requires a Hermitian sum");
  return psi.is_pure() ? expectation(h, psi.vec) : expectation(h, psi.rho);
}

GroundState exact_ground_state(const PauliSum& h) {
  check_dense_capacity(h);
  if (!h.is_hermitian()) throw ContractError("diagonalization requires a Hermitian sum");
  const Eigen::MatrixXcd m = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolver failed");
  GroundState gs;
  gs.energy = solver.eigenvalues()(0);
  gs.state = QuantumState::from_vector(h.n_qubits, solver.eigenvectors().col(0));
  return gs;
}

}  // namespace mrem
