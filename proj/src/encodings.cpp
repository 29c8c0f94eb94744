#include "wflo/encodings.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "wflo/errors.hpp"

namespace wflo {

namespace {

// Visits every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_combination(int n, int k, F&& visit) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!visit(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

void EncodingMap::write_text(std::ostream& out) const {
  const int width = observables.empty() ? 0 : observables.front().qubits();
  out << "kind " << (kind == EncodingKind::pce ? "pce" : "sqoe") << ' ' << variables() << ' '
      << width << '\n';
  for (int v = 0; v < variables(); ++v) out << v << ' ' << observables[v].letters() << '\n';
}

EncodingMap EncodingMap::read_text(std::istream& in) {
  std::string tag;
  std::string kind;
  int n = 0;
  int width = 0;
  if (!(in >> tag >> kind >> n >> width) || tag != "kind" || n < 0)
    throw std::invalid_argument("bad encoding map header");
  EncodingMap m;
  if (kind == "pce")
    m.kind = EncodingKind::pce;
  else if (kind == "sqoe")
    m.kind = EncodingKind::sqoe;
  else
    throw std::invalid_argument("unknown encoding kind '" + kind + "'");
  m.observables.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    int v = 0;
    std::string letters;
    if (!(in >> v >> letters) || v < 0 || v >= n || static_cast<int>(letters.size()) != width)
      throw std::invalid_argument("bad encoding map line");
    m.observables[static_cast<std::size_t>(v)] = PauliString(letters);
  }
  return m;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t PceConfig::capacity() const { return 3 * binomial(qubits, body); }

EncodingMap pce_enumerate(int qubits, int body, int variables) {
  if (qubits < 1 || body < 1 || body > qubits)
    throw std::invalid_argument("PCE needs 1 <= k <= n");
  if (variables < 0) throw std::invalid_argument("variable count must be >= 0");
  const std::uint64_t cap = PceConfig{qubits, body}.capacity();
  if (cap < static_cast<std::uint64_t>(variables))
    throw CapacityError("PCE with n=" + std::to_string(qubits) + ", k=" + std::to_string(body) +
                        " holds " + std::to_string(cap) + " < " + std::to_string(variables) +
                        " variables");
  EncodingMap m;
  m.kind = EncodingKind::pce;
  for (char op : {'X', 'Y', 'Z'}) {
    for_each_combination(qubits, body, [&](const std::vector<int>& support) {
      if (m.variables() >= variables) return false;
      m.observables.push_back(PauliString::on(qubits, op, support));
      return true;
    });
  }
  return m;
}

int pce_min_qubits(int body, int variables) {
  if (body < 1) throw std::invalid_argument("k must be >= 1");
  for (int n = std::max(body, 2); n <= kMaxQubits; ++n)
    if (PceConfig{n, body}.capacity() >= static_cast<std::uint64_t>(variables)) return n;
  throw CapacityError("no PCE register up to " + std::to_string(kMaxQubits) + " qubits holds " +
                      std::to_string(variables) + " variables at k=" + std::to_string(body));
}

PceAnsatz::PceAnsatz(int qubits, int body) : qubits_(qubits), body_(body) {
  if (qubits < 2) throw std::invalid_argument("PCE ansatz needs at least two qubits");
  if (qubits > kMaxQubits) throw CapabilityError("PCE ansatz wider than the simulator");
  if (body < 1 || body > qubits) throw std::invalid_argument("PCE needs 1 <= k <= n");
}

Circuit PceAnsatz::bind(std::span<const double> parameters) const {
  if (static_cast<int>(parameters.size()) != parameter_count())
    throw std::invalid_argument("PCE parameter vector has the wrong length");
  Circuit c(qubits_);
  std::size_t p = 0;
  for (int block = 0; block <= body_; ++block) {
    for (int q = 0; q < qubits_; ++q) c.ry(q, parameters[p++]);
    for (int q = 0; q + 1 < qubits_; ++q) c.cnot(q, q + 1);
    for (int q = 0; q < qubits_; ++q) c.ry(q, parameters[p++]);
  }
  return c;
}

PceAnsatz pce_build_ansatz(int qubits, int body) { return PceAnsatz(qubits, body); }

std::vector<double> pce_expectations(const PceAnsatz& ansatz, const EncodingMap& map,
                                     std::span<const double> parameters) {
  const Statevector state = run_circuit(ansatz.bind(parameters));
  std::vector<double> out;
  out.reserve(map.observables.size());
  for (const auto& p : map.observables) out.push_back(exact_expectation(state, p));
  return out;
}

int SqoeConfig::active_qubits() const { return gapped ? std::max(1, qubits / 2) : qubits; }

std::vector<int> SqoeConfig::variables_of(int parameter) const {
  std::vector<int> out;
  for (int v : {2 * parameter, 2 * parameter + 1})
    if (v < variables) out.push_back(v);
  return out;
}

SqoeConfig sqoe_assign(int variables, int qubits, bool allow_cycling, bool gapped) {
  if (qubits <= 0) throw std::invalid_argument("SQOE needs at least one qubit");
  if (variables < 0) throw std::invalid_argument("variable count must be >= 0");
  SqoeConfig c;
  c.qubits = qubits;
  c.variables = variables;
  c.gapped = gapped;
  if (c.cycling() && !allow_cycling)
    throw CapacityError("SQOE with q=" + std::to_string(qubits) + " holds " +
                        std::to_string(2 * c.active_qubits()) + " < " + std::to_string(variables) +
                        " variables without parameter cycling");
  const int active = c.active_qubits();
  const int stride = gapped ? 2 : 1;
  c.slots.reserve(static_cast<std::size_t>(variables));
  for (int v = 0; v < variables; ++v) {
    const int p = v / 2;
    c.slots.push_back({p, (p % active) * stride, v % 2 == 0 ? Axis::z : Axis::x});
  }
  return c;
}

EncodingMap sqoe_encoding_map(const SqoeConfig& config) {
  EncodingMap m;
  m.kind = EncodingKind::sqoe;
  for (const auto& s : config.slots)
    m.observables.push_back(PauliString::on(config.qubits, s.axis == Axis::z ? 'Z' : 'X', {s.qubit}));
  return m;
}

GateCounts sqoe_gate_counts(int qubits, bool gapped) {
  if (qubits <= 0) throw std::invalid_argument("SQOE needs at least one qubit");
  return {gapped ? qubits / 2 : qubits, 0};
}

Circuit sqoe_slot_circuit(std::span<const double> angles) {
  Circuit c(static_cast<int>(angles.size()));
  for (std::size_t q = 0; q < angles.size(); ++q) c.ry(static_cast<int>(q), angles[q]);
  return c;
}

std::vector<double> sqoe_expectations(const SqoeConfig& config, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != config.parameter_count())
    throw std::invalid_argument("theta length must equal the SQOE parameter count");
  std::vector<double> raw(static_cast<std::size_t>(config.variables));
  for (int v = 0; v < config.variables; ++v) {
    const auto& s = config.slots[static_cast<std::size_t>(v)];
    const double th = theta[static_cast<std::size_t>(s.parameter)];
    raw[static_cast<std::size_t>(v)] =
        s.axis == Axis::z ? std::cos(th) : std::sin(config.transform.x_angle(th));
  }
  return raw;
}

SlotReadout sqoe_measure(std::span<const double> theta, const SqoeTransform& transform, int width,
                         std::uint64_t shots, std::mt19937_64& rng) {
  SlotReadout r;
  r.z.resize(theta.size());
  r.x.resize(theta.size());
  if (shots == 0) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      r.z[i] = std::cos(theta[i]);
      r.x[i] = std::sin(transform.x_angle(theta[i]));
    }
    return r;
  }
  if (width < 1) throw std::invalid_argument("measurement width must be >= 1");
  const auto w = static_cast<std::size_t>(std::min(width, kMaxQubits));
  for (std::size_t start = 0; start < theta.size(); start += w) {
    const std::size_t len = std::min(w, theta.size() - start);
    std::vector<double> z_angles(theta.begin() + static_cast<std::ptrdiff_t>(start),
                                 theta.begin() + static_cast<std::ptrdiff_t>(start + len));
    // <X> after RY(phi) equals <Z> after RY(phi - pi/2), so the X-slot basis
    // change folds into the single rotation.
    std::vector<double> x_angles(len);
    for (std::size_t i = 0; i < len; ++i)
      x_angles[i] = transform.x_angle(z_angles[i]) - std::numbers::pi / 2.0;

    std::vector<PauliString> zs;
    for (std::size_t q = 0; q < len; ++q)
      zs.push_back(PauliString::on(static_cast<int>(len), 'Z', {static_cast<int>(q)}));

    const auto zc = sample_counts(run_circuit(sqoe_slot_circuit(z_angles)), shots, rng());
    const auto xc = sample_counts(run_circuit(sqoe_slot_circuit(x_angles)), shots, rng());
    const auto zv = multi_expectations(zc, zs);
    const auto xv = multi_expectations(xc, zs);
    for (std::size_t i = 0; i < len; ++i) {
      r.z[start + i] = zv[i];
      r.x[start + i] = xv[i];
    }
  }
  return r;
}

std::vector<double> sqoe_expectations(const SqoeConfig& config, std::span<const double> theta,
                                      std::uint64_t shots, std::mt19937_64& rng) {
  if (static_cast<int>(theta.size()) != config.parameter_count())
    throw std::invalid_argument("theta length must equal the SQOE parameter count");
  const auto m = sqoe_measure(theta, config.transform, config.active_qubits(), shots, rng);
  std::vector<double> raw(static_cast<std::size_t>(config.variables));
  for (int v = 0; v < config.variables; ++v) {
    const auto& s = config.slots[static_cast<std::size_t>(v)];
    const auto p = static_cast<std::size_t>(s.parameter);
    raw[static_cast<std::size_t>(v)] = s.axis == Axis::z ? m.z[p] : m.x[p];
  }
  return raw;
}

DecodedSpins decode_spins(std::span<const double> raw, double step_scale) {
  if (!(step_scale > 0.0)) throw std::domain_error("step scale t must be > 0");
  DecodedSpins d;
  d.relaxed.resize(static_cast<Eigen::Index>(raw.size()));
  d.layout = Layout(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    d.relaxed[static_cast<Eigen::Index>(i)] = std::tanh(step_scale * raw[i]);
    d.layout.set(i, raw[i] > 0.0);
  }
  return d;
}

}  // namespace wflo
