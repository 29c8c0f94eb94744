#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wflo {

inline constexpr int kMaxQubits = 22;
inline constexpr std::uint64_t kDefaultShots = 4096;

struct Gate {
  enum class Kind { ry, cnot };
  Kind kind = Kind::ry;
  int target = 0;
  int control = -1;  // cnot only
  double angle = 0.0;  // ry only, radians
};

class Circuit {
 public:
  explicit Circuit(int qubits);

  int qubits() const { return qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& ry(int qubit, double angle);
  Circuit& cnot(int control, int target);
  /// Appends all gates of `other` (same width).
  Circuit& append(const Circuit& other);

  int rotation_count() const;
  int cnot_count() const;

  /// One gate per line: "ry q angle" / "cx c t".
  std::string to_text() const;

 private:
  void check_qubit(int q) const;

  int qubits_;
  std::vector<Gate> gates_;
};

/// Amplitudes indexed little-endian: bit q of the index is qubit q.
class Statevector {
 public:
  explicit Statevector(int qubits);

  int qubits() const { return qubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double> operator[](std::uint64_t i) const { return amps_[i]; }
  double norm_squared() const;

  void apply(const Gate& g);
  void apply(const Circuit& c);

 private:
  int qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Pauli string stored per qubit: letters()[q] is the operator on qubit q.
class PauliString {
 public:
  PauliString() = default;
  /// `letters` over {I,X,Y,Z}; throws std::invalid_argument otherwise.
  explicit PauliString(std::string letters);
  /// Single-letter operator `op` on the listed qubits of an n-qubit register.
  static PauliString on(int qubits, char op, const std::vector<int>& support);

  int qubits() const { return static_cast<int>(letters_.size()); }
  const std::string& letters() const { return letters_; }
  std::vector<int> support() const;
  int weight() const;
  bool is_identity() const { return weight() == 0; }

  std::uint64_t x_mask() const;  // X or Y
  std::uint64_t z_mask() const;  // Z or Y
  int y_count() const;

  /// Compact label such as "X0X2".
  std::string label() const;

  bool operator==(const PauliString&) const = default;
  auto operator<=>(const PauliString&) const = default;

 private:
  std::string letters_;
};

struct CountsTable {
  int qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // outcome -> occurrences

  /// Outcome rendered with qubit 0 as the rightmost character.
  std::string bitstring(std::uint64_t outcome) const;
  static std::uint64_t parse_bitstring(const std::string& bits);
  /// Builds a table from {"01": 100, ...}; shots is the sum of counts.
  static CountsTable from_strings(int qubits, const std::map<std::string, std::uint64_t>& c);

  void write_csv(std::ostream& out) const;
};

Statevector run_circuit(const Circuit& circuit);

/// <psi|P|psi>; the all-identity string returns 1.
double exact_expectation(const Statevector& state, const PauliString& observable);

/// Deterministic for a fixed seed. Throws std::domain_error for shots == 0.
CountsTable sample_counts(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

/// Signed parity average over the support bits only.
double expectation_from_counts(const CountsTable& counts, const std::vector<int>& support);

/// One expectation per observable from a single table; supports must be
/// pairwise disjoint (ContractError otherwise).
std::vector<double> multi_expectations(const CountsTable& counts,
                                       const std::vector<PauliString>& observables);

/// Pre-measurement rotations mapping each X letter onto Z (RY(-pi/2)).
/// Requires disjoint supports; Y letters raise std::invalid_argument.
Circuit basis_plan(const std::vector<PauliString>& observables);

}  // namespace wflo
