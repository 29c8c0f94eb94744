#include "wflo/quantum_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wflo/errors.hpp"

namespace wflo {

Circuit::Circuit(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits)
    throw std::out_of_range("circuit width must lie in [1, " + std::to_string(kMaxQubits) + "]");
}

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= qubits_) throw std::out_of_range("qubit index out of range");
}

Circuit& Circuit::ry(int qubit, double angle) {
  check_qubit(qubit);
  gates_.push_back({Gate::Kind::ry, qubit, -1, angle});
  return *this;
}

Circuit& Circuit::cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("CNOT control equals target");
  gates_.push_back({Gate::Kind::cnot, target, control, 0.0});
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.qubits_ != qubits_) throw std::invalid_argument("circuit width mismatch");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

int Circuit::rotation_count() const {
  return static_cast<int>(std::count_if(gates_.begin(), gates_.end(),
                                        [](const Gate& g) { return g.kind == Gate::Kind::ry; }));
}

int Circuit::cnot_count() const {
  return static_cast<int>(gates_.size()) - rotation_count();
}

std::string Circuit::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "qubits " << qubits_ << '\n';
  for (const auto& g : gates_) {
    if (g.kind == Gate::Kind::ry)
      out << "ry " << g.target << ' ' << g.angle << '\n';
    else
      out << "cx " << g.control << ' ' << g.target << '\n';
  }
  return out.str();
}

Statevector::Statevector(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) throw std::out_of_range("statevector width out of range");
  amps_.assign(std::size_t{1} << qubits, {0.0, 0.0});
  amps_[0] = 1.0;
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void Statevector::apply(const Gate& g) {
  if (g.target < 0 || g.target >= qubits_) throw std::out_of_range("qubit index out of range");
  const std::uint64_t tbit = std::uint64_t{1} << g.target;
  const std::uint64_t dim = amps_.size();
  if (g.kind == Gate::Kind::ry) {
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    for (std::uint64_t i = 0; i < dim; ++i) {
      if (i & tbit) continue;
      const auto a0 = amps_[i];
      const auto a1 = amps_[i | tbit];
      amps_[i] = c * a0 - s * a1;
      amps_[i | tbit] = s * a0 + c * a1;
    }
    return;
  }
  if (g.control < 0 || g.control >= qubits_ || g.control == g.target)
    throw std::out_of_range("bad CNOT control");
  const std::uint64_t cbit = std::uint64_t{1} << g.control;
  for (std::uint64_t i = 0; i < dim; ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
}

void Statevector::apply(const Circuit& c) {
  if (c.qubits() != qubits_) throw std::invalid_argument("circuit width mismatch");
  for (const auto& g : c.gates()) apply(g);
}

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
  if (static_cast<int>(letters_.size()) > kMaxQubits)
    throw std::invalid_argument("Pauli string longer than the simulator width");
  for (char ch : letters_)
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
      throw std::invalid_argument("Pauli letters must be I, X, Y or Z");
}

PauliString PauliString::on(int qubits, char op, const std::vector<int>& support) {
  std::string s(static_cast<std::size_t>(qubits), 'I');
  for (int q : support) {
    if (q < 0 || q >= qubits) throw std::out_of_range("Pauli support out of range");
    s[static_cast<std::size_t>(q)] = op;
  }
  return PauliString(std::move(s));
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::size_t q = 0; q < letters_.size(); ++q)
    if (letters_[q] != 'I') out.push_back(static_cast<int>(q));
  return out;
}

int PauliString::weight() const {
  return static_cast<int>(letters_.size() - std::count(letters_.begin(), letters_.end(), 'I'));
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q)
    if (letters_[q] == 'X' || letters_[q] == 'Y') m |= std::uint64_t{1} << q;
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q)
    if (letters_[q] == 'Z' || letters_[q] == 'Y') m |= std::uint64_t{1} << q;
  return m;
}

int PauliString::y_count() const {
  return static_cast<int>(std::count(letters_.begin(), letters_.end(), 'Y'));
}

std::string PauliString::label() const {
  std::string out;
  for (std::size_t q = 0; q < letters_.size(); ++q)
    if (letters_[q] != 'I') out += letters_[q] + std::to_string(q);
  return out.empty() ? "I" : out;
}

std::string CountsTable::bitstring(std::uint64_t outcome) const {
  std::string s(static_cast<std::size_t>(qubits), '0');
  for (int q = 0; q < qubits; ++q)
    if ((outcome >> q) & 1U) s[static_cast<std::size_t>(qubits - 1 - q)] = '1';
  return s;
}

std::uint64_t CountsTable::parse_bitstring(const std::string& bits) {
  std::uint64_t v = 0;
  const std::size_t n = bits.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (bits[k] == '1')
      v |= std::uint64_t{1} << (n - 1 - k);
    else if (bits[k] != '0')
      throw std::invalid_argument("bitstrings may only contain 0 and 1");
  }
  return v;
}

CountsTable CountsTable::from_strings(int qubits, const std::map<std::string, std::uint64_t>& c) {
  CountsTable t;
  t.qubits = qubits;
  for (const auto& [bits, n] : c) {
    if (static_cast<int>(bits.size()) != qubits)
      throw std::invalid_argument("bitstring width does not match the register");
    t.counts[parse_bitstring(bits)] += n;
    t.shots += n;
  }
  return t;
}

void CountsTable::write_csv(std::ostream& out) const {
  out << "bitstring,count\n";
  for (const auto& [outcome, n] : counts) out << bitstring(outcome) << ',' << n << '\n';
}

Statevector run_circuit(const Circuit& circuit) {
  Statevector s(circuit.qubits());
  s.apply(circuit);
  return s;
}

double exact_expectation(const Statevector& state, const PauliString& observable) {
  if (observable.qubits() != state.qubits())
    throw std::invalid_argument("observable width does not match the state");
  if (observable.is_identity()) return 1.0;
  const std::uint64_t xm = observable.x_mask();
  const std::uint64_t zm = observable.z_mask();
  // P|b> = i^{#Y} (-1)^{popcount(b & zm)} |b ^ xm>
  static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> phase = kIPow[observable.y_count() % 4];
  const auto& a = state.amplitudes();
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < a.size(); ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    acc += std::conj(a[b ^ xm]) * a[b] * sign;
  }
  return std::clamp((phase * acc).real(), -1.0, 1.0);
}

CountsTable sample_counts(const Statevector& state, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::domain_error("shots must be >= 1");
  const auto& a = state.amplitudes();
  std::vector<double> cdf(a.size());
  double run = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    run += std::norm(a[i]);
    cdf[i] = run;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, run);
  CountsTable t;
  t.qubits = state.qubits();
  t.shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = uni(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) --it;
    // upper_bound lands on the first strictly larger entry, so outcomes with
    // zero probability are never selected.
    auto idx = static_cast<std::uint64_t>(it - cdf.begin());
    t.counts[idx] += 1;
  }
  return t;
}

double expectation_from_counts(const CountsTable& counts, const std::vector<int>& support) {
  if (support.empty()) throw std::domain_error("expectation support must not be empty");
  if (counts.shots == 0) throw std::domain_error("counts table is empty");
  std::uint64_t mask = 0;
  for (int q : support) {
    if (q < 0 || q >= counts.qubits) throw std::out_of_range("support qubit out of range");
    mask |= std::uint64_t{1} << q;
  }
  long double acc = 0.0;
  for (const auto& [outcome, n] : counts.counts)
    acc += (std::popcount(outcome & mask) & 1) ? -static_cast<long double>(n)
                                               : static_cast<long double>(n);
  return static_cast<double>(acc / static_cast<long double>(counts.shots));
}

namespace {

void require_disjoint(const std::vector<PauliString>& observables) {
  std::uint64_t used = 0;
  for (const auto& p : observables) {
    const std::uint64_t m = p.x_mask() | p.z_mask();
    if (m & used) throw ContractError("observables share qubits");
    used |= m;
  }
}

}  // namespace

std::vector<double> multi_expectations(const CountsTable& counts,
                                       const std::vector<PauliString>& observables) {
  require_disjoint(observables);
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& p : observables) out.push_back(expectation_from_counts(counts, p.support()));
  return out;
}

Circuit basis_plan(const std::vector<PauliString>& observables) {
  if (observables.empty()) throw std::invalid_argument("basis plan needs at least one observable");
  require_disjoint(observables);
  Circuit c(observables.front().qubits());
  for (const auto& p : observables) {
    if (p.qubits() != c.qubits()) throw std::invalid_argument("observable width mismatch");
    for (int q : p.support()) {
      const char op = p.letters()[static_cast<std::size_t>(q)];
      if (op == 'Y') throw std::invalid_argument("Y-basis measurement is not supported");
      if (op == 'X') c.ry(q, -std::numbers::pi / 2.0);
    }
  }
  return c;
}

}  // namespace wflo
