#include "mrem/taper.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mrem {

namespace {

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

// Pauli code at one qubit: 0 = I, 1 = X, 2 = Y, 3 = Z.
inline int code_at(const PauliTerm& t, int q) {
  const int xb = static_cast<int>((t.x_mask >> q) & 1);
  const int zb = static_cast<int>((t.z_mask >> q) & 1);
  return xb && zb ? 2 : (xb ? 1 : (zb ? 3 : 0));
}

PauliTerm single_qubit(int n, int q, char kind) {
  PauliTerm t = PauliTerm::identity(n);
  if (kind == 'X' || kind == 'Y') t.x_mask |= std::uint64_t{1} << q;
  if (kind == 'Z' || kind == 'Y') t.z_mask |= std::uint64_t{1} << q;
  return t;
}

// Packs [z | x] into one word for GF(2) work: bit c < n is z bit c, bit
// n + c is x bit c. That column order makes Gaussian elimination prefer
// Z-part pivots, which admit X partners.
std::uint64_t pack_zx(const PauliTerm& t, int n) {
  return t.z_mask | (t.x_mask << n);
}

}  // namespace

std::vector<PauliTerm> find_symmetries(const PauliSum& h) {
  const int n = h.n_qubits;
  if (n <= 0) throw DimensionError("empty register");
  if (n > kMaxSymmetryQubits)
    throw CapacityError("symmetry search limited to " + std::to_string(kMaxSymmetryQubits) +
                        " qubits");

  // A candidate (x', z') commutes with a term (x, z) iff z.x' + x.z' = 0
  // over GF(2). The unknown is packed as [x' low | z' high], so each term
  // contributes the constraint row [z low | x high].
  std::vector<std::uint64_t> rows;
  rows.reserve(h.terms.size());
  for (const auto& t : h.terms) {
    const std::uint64_t row = t.z_mask | (t.x_mask << n);
    if (row) rows.push_back(row);
  }

  const int cols = 2 * n;
  std::vector<int> pivot_row_of_col(static_cast<std::size_t>(cols), -1);
  std::size_t next_row = 0;
  for (int c = 0; c < cols && next_row < rows.size(); ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    std::size_t found = next_row;
    while (found < rows.size() && !(rows[found] & bit)) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[next_row], rows[found]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != next_row && (rows[r] & bit)) rows[r] ^= rows[next_row];
    pivot_row_of_col[static_cast<std::size_t>(c)] = static_cast<int>(next_row);
    ++next_row;
  }

  std::vector<PauliTerm> basis;
  for (int f = 0; f < cols; ++f) {
    if (pivot_row_of_col[static_cast<std::size_t>(f)] >= 0) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (int c = 0; c < cols; ++c) {
      const int pr = pivot_row_of_col[static_cast<std::size_t>(c)];
      if (pr < 0) continue;
      if (rows[static_cast<std::size_t>(pr)] & (std::uint64_t{1} << f))
        v |= std::uint64_t{1} << c;
    }
    // v packs the solution as [x' low | z' high] to mirror the row layout.
    PauliTerm g = PauliTerm::identity(n);
    g.x_mask = v & ((std::uint64_t{1} << n) - 1);
    g.z_mask = (v >> n) & ((std::uint64_t{1} << n) - 1);
    basis.push_back(g);
  }
  return basis;
}

std::vector<int> sector_of_determinant(std::uint64_t det,
                                       const std::vector<PauliTerm>& generators) {
  std::vector<int> sector;
  sector.reserve(generators.size());
  for (const auto& g : generators) {
    if (g.x_mask != 0)
      throw SectorError("determinant is not an eigenstate of a non-diagonal generator");
    const double re = g.coeff.real();
    if (std::abs(g.coeff.imag()) > 1e-12 || std::abs(std::abs(re) - 1.0) > 1e-12)
      throw ContractError("generator coefficient must be +-1");
    int eig = parity(det & g.z_mask) ? -1 : 1;
    if (re < 0) eig = -eig;
    sector.push_back(eig);
  }
  return sector;
}

namespace {

void validate_generators(const PauliSum& h, const std::vector<PauliTerm>& gens) {
  for (const auto& g : gens) {
    if (g.n_qubits != h.n_qubits) throw DimensionError("generator width mismatch");
    if (g.is_identity()) throw ContractError("identity is not a symmetry generator");
    for (const auto& t : h.terms)
      if (!g.commutes_with(t))
        throw ContractError("generator does not commute with the Hamiltonian");
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!gens[i].commutes_with(gens[j]))
        throw ContractError("symmetry generators must mutually commute");
}

}  // namespace

SymmetrySet make_symmetry_set(const PauliSum& h, std::vector<PauliTerm> generators,
                              std::vector<int> sector) {
  if (sector.size() != generators.size())
    throw ContractError("one sector eigenvalue per generator required");
  for (int s : sector)
    if (s != 1 && s != -1) throw ContractError("sector entries must be +-1");
  for (auto& g : generators) g.coeff = 1.0;
  validate_generators(h, generators);

  const int n = h.n_qubits;
  const int k = static_cast<int>(generators.size());

  // GF(2) row reduction with sector tracking. Replacing g_s by g_s * g_p
  // multiplies the sector values; commuting Hermitian strings give +-1
  // product coefficients which fold into the sector sign.
  std::vector<std::uint64_t> words(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) words[static_cast<std::size_t>(i)] = pack_zx(generators[i], n);

  auto absorb = [&](int dst, int src) {
    const PauliTerm prod = multiply(generators[static_cast<std::size_t>(dst)],
                                    generators[static_cast<std::size_t>(src)]);
    int sign = prod.coeff.real() < 0 ? -1 : 1;
    generators[static_cast<std::size_t>(dst)] = prod;
    generators[static_cast<std::size_t>(dst)].coeff = 1.0;
    sector[static_cast<std::size_t>(dst)] =
        sector[static_cast<std::size_t>(dst)] * sector[static_cast<std::size_t>(src)] * sign;
    words[static_cast<std::size_t>(dst)] ^= words[static_cast<std::size_t>(src)];
  };

  int next = 0;
  for (int c = 0; c < 2 * n && next < k; ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    int found = next;
    while (found < k && !(words[static_cast<std::size_t>(found)] & bit)) ++found;
    if (found == k) continue;
    std::swap(words[static_cast<std::size_t>(next)], words[static_cast<std::size_t>(found)]);
    std::swap(generators[static_cast<std::size_t>(next)],
              generators[static_cast<std::size_t>(found)]);
    std::swap(sector[static_cast<std::size_t>(next)], sector[static_cast<std::size_t>(found)]);
    for (int r = 0; r < k; ++r)
      if (r != next && (words[static_cast<std::size_t>(r)] & bit)) absorb(r, next);
    ++next;
  }
  if (next != k) throw ContractError("symmetry generators are GF(2)-dependent");

  // Partner assignment: for generator i pick qubit q and kind P so that P_q
  // anticommutes with g_i and commutes with every other generator.
  SymmetrySet sym;
  sym.generators = std::move(generators);
  sym.sector = std::move(sector);
  sym.tapered_qubits.assign(static_cast<std::size_t>(k), -1);
  sym.partners.assign(static_cast<std::size_t>(k), '?');

  std::uint64_t used = 0;
  for (int i = 0; i < k; ++i) {
    bool assigned = false;
    for (char kind : {'X', 'Y', 'Z'}) {
      for (int q = 0; q < n && !assigned; ++q) {
        if (used & (std::uint64_t{1} << q)) continue;
        const PauliTerm p = single_qubit(n, q, kind);
        if (sym.generators[static_cast<std::size_t>(i)].commutes_with(p)) continue;
        bool ok = true;
        for (int j = 0; j < k && ok; ++j)
          if (j != i && !sym.generators[static_cast<std::size_t>(j)].commutes_with(p)) ok = false;
        if (!ok) continue;
        sym.tapered_qubits[static_cast<std::size_t>(i)] = q;
        sym.partners[static_cast<std::size_t>(i)] = kind;
        used |= std::uint64_t{1} << q;
        assigned = true;
      }
      if (assigned) break;
    }
    if (!assigned)
      throw InternalError("no tapering partner assignment for a symmetry generator");
  }
  return sym;
}

SymmetrySet make_symmetry_set_for_determinant(const PauliSum& h,
                                              std::vector<PauliTerm> generators,
                                              std::uint64_t reference) {
  const std::vector<int> sector = sector_of_determinant(reference, generators);
  return make_symmetry_set(h, std::move(generators), sector);
}

namespace {

// Conjugation by (partner + generator)/sqrt(2): terms commuting with both
// are fixed, anticommuting with both flip sign, the mixed cases multiply.
void conjugate_by_symmetry_rotation(PauliSum& sum, const PauliTerm& sigma,
                                    const PauliTerm& tau) {
  for (auto& t : sum.terms) {
    const bool cs = t.commutes_with(sigma);
    const bool ct = t.commutes_with(tau);
    if (cs && ct) continue;
    if (!cs && !ct) {
      t.coeff = -t.coeff;
    } else if (cs) {
      t = multiply(multiply(t, sigma), tau);
    } else {
      t = multiply(multiply(t, tau), sigma);
    }
  }
  sum.normalize();
}

// Single-qubit basis change rotating the Y or Z partner onto X, applied as
// a mask rewrite per term with exact signs (H: X<->Z, Y -> -Y; conjugation
// by S-dagger: Y -> X, X -> -Y, Z -> Z).
void rotate_partner_to_x(PauliSum& sum, int q, char kind) {
  if (kind == 'X') return;
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (auto& t : sum.terms) {
    const int c = code_at(t, q);
    if (kind == 'Z') {  // Hadamard
      if (c == 1) {
        t.x_mask &= ~bit;
        t.z_mask |= bit;
      } else if (c == 3) {
        t.z_mask &= ~bit;
        t.x_mask |= bit;
      } else if (c == 2) {
        t.coeff = -t.coeff;
      }
    } else {  // kind == 'Y'
      if (c == 2) {
        t.z_mask &= ~bit;  // Y -> X
      } else if (c == 1) {
        t.z_mask |= bit;  // X -> -Y
        t.coeff = -t.coeff;
      }
    }
  }
  sum.normalize();
}

}  // namespace

PauliSum taper_operator(const PauliSum& h, const SymmetrySet& sym) {
  const int n = h.n_qubits;
  const int k = sym.size();
  if (k == 0) return h;

  PauliSum work = h;
  work.normalize();
  std::vector<PauliTerm> gens = sym.generators;

  for (int i = 0; i < k; ++i) {
    const int q = sym.tapered_qubits[static_cast<std::size_t>(i)];
    const char kind = sym.partners[static_cast<std::size_t>(i)];
    PauliTerm tau = gens[static_cast<std::size_t>(i)];
    if (std::abs(tau.coeff.imag()) > 1e-12 || std::abs(std::abs(tau.coeff.real()) - 1.0) > 1e-12)
      throw InternalError("generator coefficient drifted off +-1");
    tau.coeff = 1.0;
    const PauliTerm sigma = single_qubit(n, q, kind);
    if (tau.commutes_with(sigma))
      throw InternalError("partner no longer anticommutes with its generator");

    conjugate_by_symmetry_rotation(work, sigma, tau);
    rotate_partner_to_x(work, q, kind);

    // Later generators commute with both sigma and tau, so the rotation
    // fixes them; only the single-qubit basis change can rewrite masks.
    for (int j = i + 1; j < k; ++j) {
      PauliSum tmp(n);
      tmp.add_term(gens[static_cast<std::size_t>(j)]);
      rotate_partner_to_x(tmp, q, kind);
      if (tmp.terms.size() != 1) throw InternalError("generator lost under basis change");
      gens[static_cast<std::size_t>(j)] = tmp.terms[0];
    }
  }

  // Every conjugated term must now act as I or X on each tapered qubit.
  std::uint64_t tapered_mask = 0;
  for (int q : sym.tapered_qubits) tapered_mask |= std::uint64_t{1} << q;
  PauliSum reduced(n - k);
  for (const auto& t : work.terms) {
    if (t.z_mask & tapered_mask)
      throw InternalError("tapered qubit carries a Z component after conjugation");
    Complex coeff = t.coeff;
    for (int i = 0; i < k; ++i)
      if ((t.x_mask >> sym.tapered_qubits[static_cast<std::size_t>(i)]) & 1)
        coeff *= static_cast<double>(sym.sector[static_cast<std::size_t>(i)]);

    std::uint64_t x = 0, z = 0;
    int out_q = 0;
    for (int q = 0; q < n; ++q) {
      if ((tapered_mask >> q) & 1) continue;
      if ((t.x_mask >> q) & 1) x |= std::uint64_t{1} << out_q;
      if ((t.z_mask >> q) & 1) z |= std::uint64_t{1} << out_q;
      ++out_q;
    }
    reduced.add_term(PauliTerm{n - k, x, z, coeff});
  }
  reduced.normalize();
  return reduced;
}

ProjectedDeterminant project_determinant(std::uint64_t det, const SymmetrySet& sym) {
  const int k = sym.size();
  if (k == 0) return {det, 1};
  for (int i = 0; i < k; ++i) {
    if (sym.generators[static_cast<std::size_t>(i)].x_mask != 0 ||
        sym.partners[static_cast<std::size_t>(i)] != 'X')
      throw SectorError("determinant projection requires diagonal (Z-type) generators");
  }
  const std::vector<int> eigs = sector_of_determinant(det, sym.generators);
  for (int i = 0; i < k; ++i)
    if (eigs[static_cast<std::size_t>(i)] != sym.sector[static_cast<std::size_t>(i)])
      throw SectorError("determinant lies outside the chosen symmetry sector");

  const int n = sym.generators[0].n_qubits;
  std::uint64_t tapered_mask = 0;
  for (int q : sym.tapered_qubits) tapered_mask |= std::uint64_t{1} << q;

  ProjectedDeterminant out;
  int out_q = 0;
  for (int q = 0; q < n; ++q) {
    if ((tapered_mask >> q) & 1) continue;
    if ((det >> q) & 1) out.bits |= std::uint64_t{1} << out_q;
    ++out_q;
  }
  for (int i = 0; i < k; ++i) {
    const int q = sym.tapered_qubits[static_cast<std::size_t>(i)];
    if (((det >> q) & 1) == 0) out.sign *= sym.sector[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace mrem
