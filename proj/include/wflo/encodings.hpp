#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wflo/farm.hpp"
#include "wflo/qubo.hpp"
#include "wflo/quantum_sim.hpp"

namespace wflo {

enum class EncodingKind { pce, sqoe };

/// Observable attached to each binary variable.
struct EncodingMap {
  EncodingKind kind = EncodingKind::pce;
  std::vector<PauliString> observables;

  int variables() const { return static_cast<int>(observables.size()); }

  /// "kind <pce|sqoe> <N> <qubits>" then one "<index> <letters>" line per
  /// variable, letters in qubit order.
  void write_text(std::ostream& out) const;
  static EncodingMap read_text(std::istream& in);
};

// ---------------------------------------------------------------------------
// Pauli correlation encoding

struct PceConfig {
  int qubits = 2;  // n
  int body = 1;    // k

  /// 3 * C(n, k)
  std::uint64_t capacity() const;
};

std::uint64_t binomial(int n, int k);

/// k-body X, then Y, then Z correlators, each block in lexicographic order of
/// the support, truncated to the first `variables`. Throws CapacityError when
/// 3*C(n,k) < variables.
EncodingMap pce_enumerate(int qubits, int body, int variables);

/// Smallest qubit count whose k-body correlators can hold `variables`.
int pce_min_qubits(int body, int variables);

/// k+1 blocks of [RY layer, CNOT chain, RY layer].
class PceAnsatz {
 public:
  PceAnsatz(int qubits, int body);

  int qubits() const { return qubits_; }
  int body() const { return body_; }
  int parameter_count() const { return 2 * (body_ + 1) * qubits_; }
  int cnot_count() const { return (body_ + 1) * (qubits_ - 1); }

  Circuit bind(std::span<const double> parameters) const;

 private:
  int qubits_;
  int body_;
};

/// Throws std::invalid_argument for n < 2 or k outside [1, n].
PceAnsatz pce_build_ansatz(int qubits, int body);

/// Exact expectation of every observable on the bound ansatz state.
std::vector<double> pce_expectations(const PceAnsatz& ansatz, const EncodingMap& map,
                                     std::span<const double> parameters);

// ---------------------------------------------------------------------------
// Single-qubit operator encoding

enum class Axis { z, x };

struct SqoeSlot {
  int parameter = 0;
  int qubit = 0;  // home qubit; cycling rebinds parameters per batch
  Axis axis = Axis::z;
};

/// X-slot angle map: the X readout uses RY(scale * (theta - shift)).
struct SqoeTransform {
  double scale = 0.3;
  double shift = 3.5;

  double x_angle(double theta) const { return scale * (theta - shift); }
};

inline constexpr double kDefaultStepScale = 5.0;

struct SqoeConfig {
  int qubits = 1;  // q
  int variables = 0;
  bool gapped = false;
  std::vector<SqoeSlot> slots;  // one per variable
  SqoeTransform transform;
  double step_scale = kDefaultStepScale;  // t

  int parameter_count() const { return (variables + 1) / 2; }
  /// Qubits that carry a rotation (every other one when gapped).
  int active_qubits() const;
  bool cycling() const { return parameter_count() > active_qubits(); }
  /// Variables driven by parameter p (one or two).
  std::vector<int> variables_of(int parameter) const;
};

/// Variable 2i -> (param i, Z), 2i+1 -> (param i, X). Throws
/// std::invalid_argument for q == 0, CapacityError when the parameters do
/// not fit on the qubits and cycling is disabled.
SqoeConfig sqoe_assign(int variables, int qubits, bool allow_cycling = true, bool gapped = false);

EncodingMap sqoe_encoding_map(const SqoeConfig& config);

struct GateCounts {
  int rotations = 0;
  int cnots = 0;
};
GateCounts sqoe_gate_counts(int qubits, bool gapped = false);

/// Product circuit with one RY per listed angle on qubits 0..angles.size()-1.
Circuit sqoe_slot_circuit(std::span<const double> angles);

/// Analytic per-variable raw values: cos(theta) on Z slots,
/// sin(scale*(theta - shift)) on X slots.
std::vector<double> sqoe_expectations(const SqoeConfig& config, std::span<const double> theta);

/// Z-slot and X-slot readouts for a list of angles.
struct SlotReadout {
  std::vector<double> z;
  std::vector<double> x;
};

/// shots == 0 gives the exact values. Otherwise the angles are packed onto
/// at most `width` qubits per circuit; each circuit is sampled once and all
/// slots are read from that single counts table.
SlotReadout sqoe_measure(std::span<const double> theta, const SqoeTransform& transform, int width,
                         std::uint64_t shots, std::mt19937_64& rng);

/// Shot-mode variant of sqoe_expectations.
std::vector<double> sqoe_expectations(const SqoeConfig& config, std::span<const double> theta,
                                      std::uint64_t shots, std::mt19937_64& rng);

// ---------------------------------------------------------------------------

struct DecodedSpins {
  SpinVector relaxed;  // tanh(t * raw)
  Layout layout;       // raw > 0 -> 1; raw == 0 -> 0
};

/// Throws std::domain_error for t <= 0.
DecodedSpins decode_spins(std::span<const double> raw, double step_scale);

}  // namespace wflo
