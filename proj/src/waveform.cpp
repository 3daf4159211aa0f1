#include "htdet/waveform.hpp"

#include <bit>
#include <charconv>
#include <unordered_map>
#include <vector>

#include "htdet/parallel.hpp"

namespace htdet {

EncodedWaveform encode_transitions(const BitVector& waveform, std::string wire) {
  if (waveform.size() < 2) {
    throw Error(ErrorCode::SequenceTooShort,
                "transition encoding needs at least 2 samples, got " + std::to_string(waveform.size()));
  }
  EncodedWaveform enc;
  enc.wire = std::move(wire);
  enc.symbols = BitVector(waveform.size() - 1);
  const auto in = waveform.words();
  auto out = enc.symbols.words();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const BitVector::Word next = i + 1 < in.size() ? in[i + 1] : 0;
    out[i] = in[i] ^ ((in[i] >> 1) | (next << 63));
  }
  enc.symbols.clear_padding();
  enc.transition_count = enc.symbols.count();
  return enc;
}

double transition_probability(const EncodedWaveform& encoded) {
  if (encoded.symbols.empty()) {
    throw Error(ErrorCode::EmptySequence, "transition probability of an empty encoding");
  }
  return static_cast<double>(encoded.transition_count) / static_cast<double>(encoded.symbols.size());
}

std::size_t count_transitions(const BitVector& waveform) noexcept {
  if (waveform.size() < 2) return 0;
  const auto in = waveform.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const BitVector::Word next = i + 1 < in.size() ? in[i + 1] : 0;
    BitVector::Word diff = in[i] ^ ((in[i] >> 1) | (next << 63));
    if (i + 1 == in.size()) {
      // keep only pairs (j, j+1) with j + 1 < size
      const std::size_t valid = (waveform.size() - 1) - i * BitVector::kWordBits;
      if (valid < BitVector::kWordBits) diff &= (BitVector::Word{1} << valid) - 1;
    }
    total += static_cast<std::size_t>(std::popcount(diff));
  }
  return total;
}

std::vector<EntropyRecord> entropy_records(const WaveformStore& store) {
  std::vector<std::size_t> wires;
  for (std::size_t w = 0; w < store.wire_count(); ++w) {
    if (store.roles()[w] != WireRole::PrimaryInput) wires.push_back(w);
  }
  std::vector<EntropyRecord> records(wires.size());
  parallel_for(wires.size(), [&](std::size_t k) {
    const std::size_t w = wires[k];
    const BitVector& row = store.row(w);
    if (row.size() < 2) {
      throw Error(ErrorCode::SequenceTooShort, "wire '" + store.names()[w] + "' has fewer than 2 samples");
    }
    const std::size_t n = row.size() - 1;
    const std::size_t tr = count_transitions(row);
    records[k] = EntropyRecord{store.names()[w], entropy_from_counts(tr, n),
                               static_cast<double>(tr) / static_cast<double>(n)};
  });
  return records;
}

std::size_t VcdImportResult::total_warnings() const noexcept {
  std::size_t n = 0;
  for (const auto& [wire, count] : unknown_value_counts) n += count;
  return n;
}

namespace {

class VcdTokens {
 public:
  explicit VcdTokens(std::string_view text) : text_(text) {}

  std::optional<std::string_view> next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string_view require(const char* what) {
    auto t = next();
    if (!t) fail(std::string("unexpected end of file, expected ") + what);
    return *t;
  }

  void skip_to_end() {
    for (;;) {
      auto t = require("$end");
      if (t == "$end") return;
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::VcdSyntaxError, "VCD line " + std::to_string(line_) + ": " + message);
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct Signal {
  std::string name;
  BitVector samples;
  char value = 'x';
  std::size_t unknown = 0;
};

std::uint64_t parse_u64(std::string_view s, const VcdTokens& tok, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) tok.fail(std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

VcdImportResult import_vcd(std::string_view text, const VcdImportOptions& options) {
  if (options.sample_period == 0) throw Error(ErrorCode::VcdSyntaxError, "sample period must be positive");
  VcdTokens tok(text);
  std::vector<std::string> scopes;
  std::vector<Signal> signals;
  std::unordered_map<std::string, std::vector<std::size_t>> by_code;
  const std::string prefix = options.scope.empty() ? "" : options.scope + ".";

  // Header.
  bool definitions_done = false;
  while (!definitions_done) {
    auto t = tok.next();
    if (!t) tok.fail("missing $enddefinitions");
    if (*t == "$scope") {
      tok.require("scope type");
      scopes.emplace_back(tok.require("scope name"));
      tok.skip_to_end();
    } else if (*t == "$upscope") {
      if (scopes.empty()) tok.fail("$upscope without $scope");
      scopes.pop_back();
      tok.skip_to_end();
    } else if (*t == "$var") {
      tok.require("var type");
      const auto width = parse_u64(tok.require("var width"), tok, "var width");
      std::string code(tok.require("id code"));
      std::string ref(tok.require("reference"));
      for (auto extra = tok.require("$end"); extra != "$end"; extra = tok.require("$end")) {
        ref += std::string(extra);
      }
      std::string full;
      for (const auto& s : scopes) full += s + ".";
      full += ref;
      if (!prefix.empty() && full.rfind(prefix, 0) != 0) continue;
      if (width != 1) {
        throw Error(ErrorCode::VectorUnsupported,
                    "variable '" + full + "' is " + std::to_string(width) + " bits wide; split vectors first");
      }
      by_code[code].push_back(signals.size());
      signals.push_back(Signal{full.substr(prefix.size()), {}, 'x', 0});
    } else if (*t == "$enddefinitions") {
      tok.skip_to_end();
      definitions_done = true;
    } else if (t->starts_with("$")) {
      tok.skip_to_end();
    } else {
      tok.fail("unexpected token '" + std::string(*t) + "' in header");
    }
  }
  if (signals.empty()) {
    throw Error(ErrorCode::NoMatchingSignals, "no scalar variables match scope '" + options.scope + "'");
  }

  std::uint64_t next_sample = 0;  // index k of the next sample to emit
  std::optional<std::uint64_t> now;
  auto emit_until = [&](std::uint64_t limit_exclusive) {
    // emit samples k with k * period < limit_exclusive
    while (next_sample * options.sample_period < limit_exclusive) {
      for (auto& s : signals) {
        if (s.value == '1') {
          s.samples.push_back(true);
        } else {
          if (s.value != '0') ++s.unknown;
          s.samples.push_back(false);
        }
      }
      ++next_sample;
    }
  };
  auto apply = [&](std::string_view code, char value) {
    auto it = by_code.find(std::string(code));
    if (it == by_code.end()) return;  // outside the scope filter
    for (std::size_t i : it->second) signals[i].value = value;
  };

  while (auto t = tok.next()) {
    const char c = (*t)[0];
    if (c == '#') {
      const auto time = parse_u64(t->substr(1), tok, "timestamp");
      if (now && time < *now) tok.fail("timestamps go backwards");
      emit_until(time);
      now = time;
    } else if (c == '$') {
      // $dumpvars, $dumpall, $dumpon, $dumpoff and their $end carry no data
      if (*t == "$comment") tok.skip_to_end();
    } else if (c == '0' || c == '1' || c == 'x' || c == 'X' || c == 'z' || c == 'Z') {
      if (t->size() < 2) tok.fail("value change without id code");
      apply(t->substr(1), static_cast<char>(c == 'X' ? 'x' : (c == 'Z' ? 'z' : c)));
    } else if (c == 'b' || c == 'B' || c == 'r' || c == 'R') {
      const auto code = tok.require("id code");
      if (by_code.contains(std::string(code))) {
        throw Error(ErrorCode::VectorUnsupported, "vector value change for a scalar variable");
      }
    } else {
      tok.fail("unexpected token '" + std::string(*t) + "'");
    }
  }
  if (now) emit_until(*now + 1);

  std::vector<std::string> names;
  std::vector<WireRole> roles;
  for (const auto& s : signals) {
    names.push_back(s.name);
    WireRole role = WireRole::Internal;
    if (options.netlist) {
      if (auto w = options.netlist->wire_index(s.name)) role = options.netlist->role(*w);
    }
    roles.push_back(role);
  }
  VcdImportResult result{WaveformStore(std::move(names), std::move(roles), next_sample), {}};
  result.store.netlist_name = options.netlist ? options.netlist->name() : options.scope;
  result.store.stimulus_digest = fnv1a64(text);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    result.store.row(i) = std::move(signals[i].samples);
    if (signals[i].unknown) result.unknown_value_counts[signals[i].name] = signals[i].unknown;
  }
  return result;
}

}  // namespace htdet
