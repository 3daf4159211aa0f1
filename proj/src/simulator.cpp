#include "htdet/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>

#include <nlohmann/json.hpp>

namespace htdet {

namespace {

using Word = BitVector::Word;
constexpr std::size_t kBlock = BitVector::kWordBits;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream seed for one primary input: depends only on (seed, input index).
std::uint64_t substream_seed(std::uint64_t seed, std::size_t input_index) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(input_index) + 1));
}

struct Op {
  GateKind kind;
  std::uint32_t out;
  std::uint32_t begin;
  std::uint32_t end;
};

struct CompiledNetlist {
  std::vector<Op> comb;  // topological order
  std::vector<std::uint32_t> fanins;
  std::vector<std::uint32_t> dff_q;
  std::vector<std::uint32_t> dff_d;
  std::vector<std::uint32_t> pis;
};

CompiledNetlist compile(const Netlist& netlist) {
  const auto report = validate(netlist);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidNetlist, "netlist is not valid: " + report.violations.front().message);
  }
  CompiledNetlist c;
  auto idx = [&](const std::string& w) { return static_cast<std::uint32_t>(*netlist.wire_index(w)); };
  for (const auto& in : netlist.inputs()) c.pis.push_back(idx(in));
  for (std::size_t g : netlist.topo_order()) {
    const Gate& gate = netlist.gates()[g];
    Op op{gate.kind, idx(gate.output), static_cast<std::uint32_t>(c.fanins.size()), 0};
    for (const auto& f : gate.fanins) c.fanins.push_back(idx(f));
    op.end = static_cast<std::uint32_t>(c.fanins.size());
    c.comb.push_back(op);
  }
  for (const auto& gate : netlist.gates()) {
    if (gate.kind == GateKind::Dff) {
      c.dff_q.push_back(idx(gate.output));
      c.dff_d.push_back(idx(gate.fanins.front()));
    }
  }
  return c;
}

inline Word eval_word(const Op& op, const std::vector<std::uint32_t>& fanins,
                      const std::vector<Word>& v) noexcept {
  const std::uint32_t* f = fanins.data() + op.begin;
  const std::uint32_t n = op.end - op.begin;
  Word acc = v[f[0]];
  switch (op.kind) {
    case GateKind::And:
    case GateKind::Nand:
      for (std::uint32_t i = 1; i < n; ++i) acc &= v[f[i]];
      return op.kind == GateKind::And ? acc : ~acc;
    case GateKind::Or:
    case GateKind::Nor:
      for (std::uint32_t i = 1; i < n; ++i) acc |= v[f[i]];
      return op.kind == GateKind::Or ? acc : ~acc;
    case GateKind::Xor:
    case GateKind::Xnor:
      for (std::uint32_t i = 1; i < n; ++i) acc ^= v[f[i]];
      return op.kind == GateKind::Xor ? acc : ~acc;
    case GateKind::Not:
      return ~acc;
    case GateKind::Buff:
    case GateKind::Dff:
      return acc;
  }
  return acc;
}

// Runs the circuit over `cycles` cycles in 64-cycle words. `fill_inputs`
// writes the PI words of block b. Within a block, DFF outputs are found by
// fixed-point iteration of Q = (D << 1) | carry, which is exact after at most
// 64 passes because bit k of Q depends only on bits < k of D.
WaveformStore run_engine(const Netlist& netlist, const CompiledNetlist& c, std::uint64_t cycles,
                         const std::function<void(std::uint64_t, std::vector<Word>&)>& fill_inputs) {
  WaveformStore store(netlist.wires(), netlist.roles(), cycles);
  store.netlist_name = netlist.name();
  const std::size_t n_wires = netlist.wires().size();
  std::vector<Word> v(n_wires, 0);
  std::vector<Word> carry(c.dff_q.size(), 0);
  std::vector<Word> next_q(c.dff_q.size(), 0);
  const std::uint64_t blocks = word_count(cycles);

  for (std::uint64_t b = 0; b < blocks; ++b) {
    fill_inputs(b, v);
    for (std::size_t k = 0; k < c.dff_q.size(); ++k) {
      v[c.dff_q[k]] = carry[k] ? ~Word{0} : Word{0};
    }
    for (std::size_t pass = 0; pass <= kBlock; ++pass) {
      for (const Op& op : c.comb) v[op.out] = eval_word(op, c.fanins, v);
      bool stable = true;
      for (std::size_t k = 0; k < c.dff_q.size(); ++k) {
        next_q[k] = (v[c.dff_d[k]] << 1) | carry[k];
        stable = stable && next_q[k] == v[c.dff_q[k]];
      }
      if (stable) break;
      for (std::size_t k = 0; k < c.dff_q.size(); ++k) v[c.dff_q[k]] = next_q[k];
    }
    const std::uint64_t in_block = std::min<std::uint64_t>(kBlock, cycles - b * kBlock);
    for (std::size_t k = 0; k < c.dff_q.size(); ++k) {
      carry[k] = (v[c.dff_d[k]] >> (in_block - 1)) & 1U;
    }
    const Word mask = in_block == kBlock ? ~Word{0} : ((Word{1} << in_block) - 1);
    for (std::size_t w = 0; w < n_wires; ++w) store.row(w).words()[b] = v[w] & mask;
  }
  return store;
}

}  // namespace

std::string_view to_string(InputPolicy policy) noexcept {
  switch (policy) {
    case InputPolicy::FullRandom: return "random";
    case InputPolicy::Const0: return "const0";
    case InputPolicy::Const1: return "const1";
  }
  return "?";
}

StimulusSpec StimulusSpec::full_random(const Netlist& netlist, std::uint64_t seed,
                                       std::uint64_t cycles) {
  StimulusSpec spec;
  spec.seed = seed;
  spec.cycles = cycles;
  for (const auto& in : netlist.inputs()) spec.inputs[in] = InputPolicy::FullRandom;
  return spec;
}

std::string to_json(const StimulusSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["cycles"] = spec.cycles;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [name, policy] : spec.inputs) inputs[name] = std::string(to_string(policy));
  j["inputs"] = std::move(inputs);
  return j.dump(2) + "\n";
}

StimulusSpec stimulus_spec_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("stimulus spec is not valid JSON: ") + e.what());
  }
  auto require_u64 = [&](const char* key) -> std::uint64_t {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_unsigned()) {
      throw Error(ErrorCode::InvalidSpec, std::string("stimulus spec needs unsigned '") + key + "'");
    }
    return j[key].get<std::uint64_t>();
  };
  StimulusSpec spec;
  spec.seed = require_u64("seed");
  spec.cycles = require_u64("cycles");
  if (!j.contains("inputs") || !j["inputs"].is_object()) {
    throw Error(ErrorCode::InvalidSpec, "stimulus spec needs an 'inputs' object");
  }
  for (const auto& [name, value] : j["inputs"].items()) {
    const std::string s = value.is_string() ? value.get<std::string>() : "";
    if (s == "random") {
      spec.inputs[name] = InputPolicy::FullRandom;
    } else if (s == "const0") {
      spec.inputs[name] = InputPolicy::Const0;
    } else if (s == "const1") {
      spec.inputs[name] = InputPolicy::Const1;
    } else {
      throw Error(ErrorCode::InvalidSpec, "input '" + name + "' has unknown policy " + value.dump());
    }
  }
  return spec;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest(const StimulusSpec& spec) { return fnv1a64(to_json(spec)); }

WaveformStore::WaveformStore(std::vector<std::string> names, std::vector<WireRole> roles,
                             std::uint64_t cycles)
    : names_(std::move(names)), roles_(std::move(roles)), cycles_(cycles) {
  roles_.resize(names_.size(), WireRole::Internal);
  rows_.assign(names_.size(), BitVector(cycles));
  for (std::size_t i = 0; i < names_.size(); ++i) by_name_.emplace(names_[i], i);
}

std::optional<std::size_t> WaveformStore::index(std::string_view wire) const {
  auto it = by_name_.find(std::string(wire));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const BitVector& WaveformStore::row(std::string_view wire) const {
  auto i = index(wire);
  if (!i) throw Error(ErrorCode::MissingWire, "wire '" + std::string(wire) + "' is not in the store");
  return rows_[*i];
}

WaveformStore simulate(const Netlist& netlist, const StimulusSpec& spec) {
  if (spec.cycles < 2) {
    throw Error(ErrorCode::CyclesTooSmall,
                "need at least 2 cycles, got " + std::to_string(spec.cycles));
  }
  for (const auto& [name, policy] : spec.inputs) {
    auto w = netlist.wire_index(name);
    if (!w || netlist.role(*w) != WireRole::PrimaryInput) {
      throw Error(ErrorCode::InvalidSpec, "spec names '" + name + "', which is not a primary input");
    }
  }
  for (const auto& in : netlist.inputs()) {
    if (!spec.inputs.contains(in)) {
      throw Error(ErrorCode::InvalidSpec, "spec has no policy for primary input '" + in + "'");
    }
  }
  const CompiledNetlist c = compile(netlist);

  std::vector<InputPolicy> policy;
  std::vector<std::mt19937_64> streams;
  for (std::size_t i = 0; i < netlist.inputs().size(); ++i) {
    policy.push_back(spec.inputs.at(netlist.inputs()[i]));
    streams.emplace_back(substream_seed(spec.seed, i));
  }
  auto fill = [&](std::uint64_t, std::vector<Word>& v) {
    for (std::size_t i = 0; i < c.pis.size(); ++i) {
      Word w = streams[i]();  // drawn for every input so streams stay aligned
      if (policy[i] == InputPolicy::Const0) w = 0;
      if (policy[i] == InputPolicy::Const1) w = ~Word{0};
      v[c.pis[i]] = w;
    }
  };
  WaveformStore store = run_engine(netlist, c, spec.cycles, fill);
  store.seed = spec.seed;
  store.stimulus_digest = digest(spec);
  return store;
}

WaveformStore exhaustive_simulate(const Netlist& netlist) {
  const std::size_t l = netlist.inputs().size();
  if (l > 20) {
    throw Error(ErrorCode::TooManyInputs,
                "exhaustive simulation supports at most 20 inputs, got " + std::to_string(l));
  }
  if (netlist.has_dff()) {
    throw Error(ErrorCode::SequentialNotSupported, "exhaustive simulation needs a combinational netlist");
  }
  const CompiledNetlist c = compile(netlist);
  const std::uint64_t cycles = std::uint64_t{1} << l;
  auto fill = [&](std::uint64_t block, std::vector<Word>& v) {
    for (std::size_t i = 0; i < l; ++i) {
      const std::size_t bit = l - 1 - i;
      Word w = 0;
      for (std::size_t t = 0; t < kBlock; ++t) {
        const std::uint64_t k = block * kBlock + t;
        if ((k >> bit) & 1U) w |= Word{1} << t;
      }
      v[c.pis[i]] = w;
    }
  };
  WaveformStore store = run_engine(netlist, c, cycles, fill);
  store.stimulus_digest = fnv1a64("exhaustive");
  return store;
}

AuditReport audit_replay(const Netlist& netlist, const WaveformStore& store,
                         std::size_t sample_cycles, std::uint64_t seed) {
  AuditReport report;
  if (store.cycles() == 0) return report;
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> cycles;
  if (sample_cycles >= store.cycles()) {
    for (std::uint64_t t = 0; t < store.cycles(); ++t) cycles.push_back(t);
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, store.cycles() - 1);
    for (std::size_t i = 0; i < sample_cycles; ++i) cycles.push_back(pick(rng));
    std::sort(cycles.begin(), cycles.end());
    cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());
  }
  auto at = [&](const std::string& wire, std::uint64_t t) { return store.row(wire)[t]; };
  for (std::uint64_t t : cycles) {
    ++report.cycles_checked;
    for (const auto& gate : netlist.gates()) {
      bool expected = false;
      if (gate.kind == GateKind::Dff) {
        expected = t == 0 ? false : at(gate.fanins.front(), t - 1);
      } else {
        std::vector<bool> in;
        for (const auto& f : gate.fanins) in.push_back(at(f, t));
        expected = eval_gate(gate.kind, in);
      }
      ++report.gate_checks;
      if (at(gate.output, t) != expected) {
        report.mismatches.push_back(gate.output + "@" + std::to_string(t));
      }
    }
  }
  return report;
}

double transition_coverage(const WaveformStore& store) {
  std::size_t total = 0;
  std::size_t toggled = 0;
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    if (store.roles()[w] == WireRole::PrimaryInput) continue;
    ++total;
    const BitVector& row = store.row(w);
    const std::size_t ones = row.count();
    if (ones != 0 && ones != row.size()) ++toggled;
  }
  return total == 0 ? 0.0 : static_cast<double>(toggled) / static_cast<double>(total);
}

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw Error(ErrorCode::BadStoreFile, "truncated waveform store");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > (1U << 24)) throw Error(ErrorCode::BadStoreFile, "implausible string length in store");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw Error(ErrorCode::BadStoreFile, "truncated waveform store");
  return s;
}

}  // namespace

void write_store(std::ostream& out, const WaveformStore& store) {
  out.write("HTDW", 4);
  put<std::uint32_t>(out, kStoreFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(store.wire_count()));
  put<std::uint64_t>(out, store.cycles());
  put<std::uint64_t>(out, store.seed);
  for (const auto& name : store.names()) put_string(out, name);
  put_string(out, store.netlist_name);
  put<std::uint64_t>(out, store.stimulus_digest);
  for (WireRole r : store.roles()) put<std::uint8_t>(out, static_cast<std::uint8_t>(r));

  const std::size_t row_bytes = (store.cycles() + 7) / 8;
  std::vector<char> buf(row_bytes);
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    const auto words = store.row(w).words();
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(buf.data(), words.data(), row_bytes);
    } else {
      for (std::size_t i = 0; i < row_bytes; ++i) {
        buf[i] = static_cast<char>(words[i / 8] >> (8 * (i % 8)));
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(row_bytes));
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing waveform store");
}

void write_store_file(const std::string& path, const WaveformStore& store) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_store(out, store);
}

WaveformStore read_store(std::istream& in) {
  char magic[4] = {};
  if (!in.read(magic, 4) || std::memcmp(magic, "HTDW", 4) != 0) {
    throw Error(ErrorCode::BadStoreFile, "bad magic: not an HTDW waveform store");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kStoreFormatVersion) {
    throw Error(ErrorCode::BadStoreFile, "unsupported store version " + std::to_string(version));
  }
  const auto n_wires = get<std::uint32_t>(in);
  const auto cycles = get<std::uint64_t>(in);
  const auto seed = get<std::uint64_t>(in);
  std::vector<std::string> names;
  names.reserve(n_wires);
  for (std::uint32_t i = 0; i < n_wires; ++i) names.push_back(get_string(in));
  std::string netlist_name = get_string(in);
  const auto stimulus_digest = get<std::uint64_t>(in);
  std::vector<WireRole> roles;
  for (std::uint32_t i = 0; i < n_wires; ++i) {
    const auto r = get<std::uint8_t>(in);
    if (r > 2) throw Error(ErrorCode::BadStoreFile, "bad wire role in store");
    roles.push_back(static_cast<WireRole>(r));
  }
  WaveformStore store(std::move(names), std::move(roles), cycles);
  store.seed = seed;
  store.netlist_name = std::move(netlist_name);
  store.stimulus_digest = stimulus_digest;
  const std::size_t row_bytes = (cycles + 7) / 8;
  std::vector<unsigned char> buf(row_bytes);
  for (std::size_t w = 0; w < n_wires; ++w) {
    if (row_bytes && !in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(row_bytes))) {
      throw Error(ErrorCode::BadStoreFile, "truncated waveform store rows");
    }
    auto words = store.row(w).words();
    std::fill(words.begin(), words.end(), 0);
    for (std::size_t i = 0; i < row_bytes; ++i) {
      words[i / 8] |= static_cast<Word>(buf[i]) << (8 * (i % 8));
    }
    store.row(w).clear_padding();
  }
  return store;
}

WaveformStore read_store_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open waveform store '" + path + "'");
  return read_store(in);
}

std::uint64_t serialized_size(const WaveformStore& store) {
  std::uint64_t n = 4 + 4 + 4 + 8 + 8;
  for (const auto& name : store.names()) n += 4 + name.size();
  n += 4 + store.netlist_name.size() + 8 + store.wire_count();
  n += store.wire_count() * ((store.cycles() + 7) / 8);
  return n;
}

std::string store_to_debug_json(const WaveformStore& store) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t w = 0; w < store.wire_count(); ++w) j[store.names()[w]] = store.row(w).to_string();
  return j.dump(2) + "\n";
}

}  // namespace htdet
