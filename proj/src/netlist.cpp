#include "htdet/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace htdet {

namespace {

bool is_wire_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '.' || c == '[' || c == ']';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::size_t required_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Not:
    case GateKind::Buff:
    case GateKind::Dff:
      return 1;
    default:
      return 2;
  }
}

bool arity_ok(GateKind kind, std::size_t n) {
  return required_arity(kind) == 1 ? n == 1 : n >= 2;
}

// Cursor over one source line with 1-based column tracking.
class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }
  [[nodiscard]] std::size_t column() const { return pos_ + 1; }

  std::string identifier(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_wire_char(line_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::string(line_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message, ErrorCode code = ErrorCode::SyntaxError) {
    skip_ws();
    std::size_t end = pos_;
    while (end < line_.size() && !std::isspace(static_cast<unsigned char>(line_[end]))) ++end;
    throw ParseError(code, line_no_, pos_ + 1, std::string(line_.substr(pos_, end - pos_)),
                     message);
  }

  [[noreturn]] void fail_at(std::size_t column, const std::string& token,
                            const std::string& message, ErrorCode code) {
    throw ParseError(code, line_no_, column, token, message);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buff: return "BUFF";
    case GateKind::Dff: return "DFF";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view keyword) noexcept {
  static constexpr GateKind kAll[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                      GateKind::Nor, GateKind::Xor,  GateKind::Xnor,
                                      GateKind::Not, GateKind::Buff, GateKind::Dff};
  const std::string key = upper(keyword);
  for (GateKind k : kAll) {
    if (key == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string_view to_string(WireRole role) noexcept {
  switch (role) {
    case WireRole::PrimaryInput: return "PI";
    case WireRole::Internal: return "W";
    case WireRole::PrimaryOutput: return "POUT";
  }
  return "?";
}

Netlist::Netlist(std::string name, std::vector<std::string> inputs,
                 std::vector<std::string> outputs, std::vector<Gate> gates)
    : name_(std::move(name)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      gates_(std::move(gates)) {
  auto add_wire = [this](const std::string& w, std::optional<std::size_t> driver) {
    if (index_.contains(w)) return;
    index_.emplace(w, wires_.size());
    wires_.push_back(w);
    drivers_.push_back(driver);
  };
  for (const auto& in : inputs_) add_wire(in, std::nullopt);
  for (std::size_t g = 0; g < gates_.size(); ++g) add_wire(gates_[g].output, g);

  roles_.assign(wires_.size(), WireRole::Internal);
  for (const auto& out : outputs_) {
    if (auto it = index_.find(out); it != index_.end()) roles_[it->second] = WireRole::PrimaryOutput;
  }
  for (const auto& in : inputs_) roles_[index_.at(in)] = WireRole::PrimaryInput;

  // Iterative DFS over combinational gates; DFF outputs and PIs are sources.
  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(gates_.size(), Mark::White);
  auto comb_driver = [this](const std::string& wire) -> std::optional<std::size_t> {
    auto it = index_.find(wire);
    if (it == index_.end()) return std::nullopt;
    auto d = drivers_[it->second];
    if (!d || gates_[*d].kind == GateKind::Dff) return std::nullopt;
    return d;
  };
  std::vector<std::size_t> order;
  order.reserve(gates_.size());
  for (std::size_t root = 0; root < gates_.size() && cycle_.empty(); ++root) {
    if (gates_[root].kind == GateKind::Dff || mark[root] != Mark::White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty() && cycle_.empty()) {
      auto& [g, next] = stack.back();
      if (next < gates_[g].fanins.size()) {
        auto d = comb_driver(gates_[g].fanins[next++]);
        if (!d) continue;
        if (mark[*d] == Mark::Grey) {
          auto it = std::find_if(stack.begin(), stack.end(),
                                 [&](const auto& frame) { return frame.first == *d; });
          for (; it != stack.end(); ++it) cycle_.push_back(gates_[it->first].output);
          cycle_.push_back(gates_[*d].output);
        } else if (mark[*d] == Mark::White) {
          mark[*d] = Mark::Grey;
          stack.emplace_back(*d, 0);
        }
      } else {
        mark[g] = Mark::Black;
        order.push_back(g);
        stack.pop_back();
      }
    }
  }
  if (cycle_.empty()) topo_order_ = std::move(order);
}

std::optional<std::size_t> Netlist::wire_index(std::string_view wire) const {
  auto it = index_.find(std::string(wire));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Netlist::has_dff() const noexcept {
  return std::any_of(gates_.begin(), gates_.end(),
                     [](const Gate& g) { return g.kind == GateKind::Dff; });
}

std::optional<std::size_t> Netlist::driver(std::size_t wire) const noexcept {
  return drivers_[wire];
}

ValidationReport validate(const Netlist& netlist) {
  ValidationReport report;
  auto add = [&report](ErrorCode code, const std::string& subject, std::string message) {
    report.violations.push_back({code, subject, std::move(message)});
  };

  std::unordered_set<std::string> driven;
  for (const auto& in : netlist.inputs()) {
    if (!driven.insert(in).second) add(ErrorCode::DuplicateDriver, in, "input declared twice");
  }
  for (const auto& gate : netlist.gates()) {
    if (!driven.insert(gate.output).second) {
      add(ErrorCode::DuplicateDriver, gate.output, "wire '" + gate.output + "' has two drivers");
    }
  }
  if (!netlist.combinational_cycle().empty()) {
    std::string path;
    for (const auto& w : netlist.combinational_cycle()) {
      if (!path.empty()) path += " -> ";
      path += w;
    }
    add(ErrorCode::CombinationalLoop, netlist.combinational_cycle().front(),
        "combinational loop: " + path);
  }
  for (const auto& gate : netlist.gates()) {
    if (!arity_ok(gate.kind, gate.fanins.size())) {
      add(ErrorCode::InvalidNetlist, gate.output,
          std::string(to_string(gate.kind)) + " gate '" + gate.output + "' has " +
              std::to_string(gate.fanins.size()) + " fanins");
    }
    for (const auto& f : gate.fanins) {
      if (!driven.contains(f)) {
        add(ErrorCode::UndeclaredWire, f,
            "gate '" + gate.output + "' reads undeclared wire '" + f + "'");
      }
    }
  }
  for (const auto& out : netlist.outputs()) {
    if (!driven.contains(out)) add(ErrorCode::UndeclaredWire, out, "output '" + out + "' is never driven");
  }
  return report;
}

Netlist parse_bench(std::string_view text, std::string name) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineLexer lex(line, line_no);
    if (lex.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t head_col = lex.column();
    std::string head = lex.identifier("wire name or INPUT/OUTPUT");
    const std::string head_upper = upper(head);
    if ((head_upper == "INPUT" || head_upper == "OUTPUT") && lex.accept('(')) {
      std::string wire = lex.identifier("wire name");
      lex.expect(')');
      if (!lex.at_end()) lex.fail("unexpected trailing text");
      (head_upper == "INPUT" ? inputs : outputs).push_back(std::move(wire));
    } else {
      lex.expect('=');
      const std::size_t kind_col = lex.column();
      std::string keyword = lex.identifier("gate kind");
      auto kind = gate_kind_from_string(keyword);
      if (!kind) {
        lex.fail_at(kind_col, keyword, "unsupported gate kind '" + keyword + "'",
                    ErrorCode::UnsupportedGateKind);
      }
      lex.expect('(');
      std::vector<std::string> fanins;
      fanins.push_back(lex.identifier("fanin wire"));
      while (lex.accept(',')) fanins.push_back(lex.identifier("fanin wire"));
      lex.expect(')');
      if (!lex.at_end()) lex.fail("unexpected trailing text");
      if (!arity_ok(*kind, fanins.size())) {
        lex.fail_at(head_col, head,
                    std::string(to_string(*kind)) +
                        (required_arity(*kind) == 1 ? " takes exactly one fanin"
                                                    : " needs at least two fanins"),
                    ErrorCode::SyntaxError);
      }
      gates.push_back(Gate{*kind, std::move(head), std::move(fanins)});
    }
    if (end == text.size()) break;
  }

  Netlist netlist(std::move(name), std::move(inputs), std::move(outputs), std::move(gates));
  const auto report = validate(netlist);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(v.code, v.message);
  }
  return netlist;
}

Netlist read_bench_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open netlist '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.rfind(".bench"); dot != std::string::npos && dot + 6 == name.size()) {
    name.resize(dot);
  }
  return parse_bench(buf.str(), name);
}

std::string to_bench(const Netlist& netlist) {
  std::ostringstream out;
  out << "# " << netlist.name() << "\n";
  for (const auto& in : netlist.inputs()) out << "INPUT(" << in << ")\n";
  for (const auto& o : netlist.outputs()) out << "OUTPUT(" << o << ")\n";
  for (const auto& g : netlist.gates()) {
    out << g.output << " = " << to_string(g.kind) << "(";
    for (std::size_t i = 0; i < g.fanins.size(); ++i) out << (i ? ", " : "") << g.fanins[i];
    out << ")\n";
  }
  return out.str();
}

bool eval_gate(GateKind kind, const std::vector<bool>& fanins) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      bool v = std::all_of(fanins.begin(), fanins.end(), [](bool b) { return b; });
      return kind == GateKind::And ? v : !v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      bool v = std::any_of(fanins.begin(), fanins.end(), [](bool b) { return b; });
      return kind == GateKind::Or ? v : !v;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      bool v = false;
      for (bool b : fanins) v = v != b;
      return kind == GateKind::Xor ? v : !v;
    }
    case GateKind::Not:
      return !fanins.at(0);
    case GateKind::Buff:
    case GateKind::Dff:
      return fanins.at(0);
  }
  return false;
}

}  // namespace htdet
