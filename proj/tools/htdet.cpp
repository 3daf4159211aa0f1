// htdet: simulate -> detect -> testgen -> eval, with file handoffs.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "htdet/error.hpp"
#include "htdet/eval.hpp"
#include "htdet/netlist.hpp"
#include "htdet/report.hpp"
#include "htdet/simulator.hpp"
#include "htdet/testgen.hpp"
#include "htdet/waveform.hpp"

namespace {

using namespace htdet;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON keeps full precision; the console rounds to whole percent.
std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f%%", *v * 100.0);
  return buf;
}

void print_metrics(const EvalMetrics& m) {
  std::cout << "TP " << m.tp << "  FP " << m.fp << "  TN " << m.tn << "  FN " << m.fn << "\n"
            << "TPR " << percent(m.tpr) << "  TNR " << percent(m.tnr) << "  FPR " << percent(m.fpr) << "\n";
}

struct SimulateArgs {
  std::string netlist, out, spec;
  std::uint64_t cycles = 1000000;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App& sub) {
  const Netlist netlist = read_bench_file(a.netlist);
  StimulusSpec spec;
  if (!a.spec.empty()) {
    spec = stimulus_spec_from_json(read_text(a.spec));
    if (sub.count("--cycles")) spec.cycles = a.cycles;
    if (sub.count("--seed")) spec.seed = a.seed;
  } else {
    spec = StimulusSpec::full_random(netlist, a.seed, a.cycles);
  }
  const WaveformStore store = simulate(netlist, spec);
  write_store_file(a.out, store);
  std::cout << "simulated " << store.wire_count() << " wires x " << store.cycles() << " cycles -> " << a.out
            << "\n";
  return 0;
}

struct ImportArgs {
  std::string vcd, scope, out, netlist;
  std::uint64_t period = 1;
};

int cmd_import(const ImportArgs& a) {
  std::optional<Netlist> netlist;
  if (!a.netlist.empty()) netlist = read_bench_file(a.netlist);
  VcdImportOptions opts{a.scope, a.period, netlist ? &*netlist : nullptr};
  const VcdImportResult r = import_vcd(read_text(a.vcd), opts);
  write_store_file(a.out, r.store);
  for (const auto& [wire, n] : r.unknown_value_counts) {
    std::cerr << "htdet: warning: " << wire << ": " << n << " x/z samples read as 0\n";
  }
  std::cout << "imported " << r.store.wire_count() << " wires x " << r.store.cycles() << " samples -> " << a.out
            << "\n";
  return 0;
}

struct DetectArgs {
  std::string waves, report, labels, space = "entropy", csv;
  double radius = 0.05;
  std::size_t min_pts = 5;
  bool include_low_noise = false;
  bool no_timestamp = false;
};

int cmd_detect(const DetectArgs& a) {
  const WaveformStore store = read_store_file(a.waves);
  DetectOptions opts;
  opts.params.radius = a.radius;
  opts.params.min_pts = a.min_pts;
  opts.params.space = a.space == "probability" ? ClusterSpace::Probability : ClusterSpace::Entropy;
  opts.suspects.include_low_noise = a.include_low_noise;
  DetectionReport report = run_detection(store, opts);
  if (!a.no_timestamp) report.meta.timestamp = utc_timestamp();
  if (!a.labels.empty()) {
    report.metrics = score(std::set<std::string>(report.suspects.begin(), report.suspects.end()),
                           read_labels_file(a.labels), analysis_universe(store));
  }
  write_text(a.report, to_json(report));
  if (!a.csv.empty()) write_text(a.csv, entropy_distribution_csv(report));

  for (const auto& w : report.warnings) std::cerr << "htdet: warning: " << w << "\n";
  std::cout << report.rows.size() << " wires, " << report.cluster_count << " clusters, " << report.suspects.size()
            << " suspects\n";
  for (const auto& s : report.suspects) std::cout << "  " << s << "\n";
  if (report.metrics) print_metrics(*report.metrics);
  return 0;
}

struct TestgenArgs {
  std::string waves, report, out, hold = "majority", strategy = "auto";
  std::uint64_t seed = 0, cycles = 0;
  bool annotate = false;
};

int cmd_testgen(const TestgenArgs& a, const CLI::App& sub) {
  const WaveformStore store = read_store_file(a.waves);
  DetectionReport report = detection_report_from_json(read_text(a.report));
  const SuspectSet suspects = suspects_of(report);
  if (suspects.wires.empty()) throw Error(ErrorCode::NothingToCover, "report has no suspicious wires");

  const StrongCorrelationList list = build_correlation_list(store, suspects);
  const CoverStrategy strategy = a.strategy == "exact"    ? CoverStrategy::Exact
                                 : a.strategy == "greedy" ? CoverStrategy::Greedy
                                                          : CoverStrategy::Auto;
  const ScpiSelection sel = select_scpi(list, strategy);
  const HoldValue hold = a.hold == "0" ? HoldValue::Zero : a.hold == "1" ? HoldValue::One : HoldValue::Majority;
  const std::uint64_t seed = sub.count("--seed") ? a.seed : store.seed;
  const std::uint64_t cycles = sub.count("--cycles") ? a.cycles : store.cycles();
  const ConstrainedSpec cs = make_constrained_spec(sel, list.inputs, store, seed, cycles, hold);
  write_text(a.out, to_json(cs.spec));

  for (const auto& w : cs.warnings) std::cerr << "htdet: warning: " << w << "\n";
  std::cout << "cover size " << sel.chosen_names.size() << (sel.optimal ? " (optimal)" : " (greedy)") << "\n";
  for (const auto& n : sel.chosen_names) std::cout << "  SCPI " << n << "\n";
  std::cout << "uncoverable " << sel.uncoverable.size() << "\n";
  for (const auto& n : sel.uncoverable) std::cout << "  " << n << "\n";

  if (a.annotate) {
    report.testgen = TestgenSection{digest(list), sel.chosen_names, sel.uncoverable, sel.optimal, a.out};
    write_text(a.report, to_json(report));
  }
  return 0;
}

struct EvalArgs {
  std::string before, after, report, labels;
};

int cmd_eval(const EvalArgs& a) {
  const WaveformStore before = read_store_file(a.before);
  const WaveformStore after = read_store_file(a.after);
  const DetectionReport report = detection_report_from_json(read_text(a.report));
  const TransitionComparison cmp = transition_gain(before, after, report.suspects);

  char line[128];
  std::snprintf(line, sizeof line, "%-8s %12s %14s\n", "", "tr_max", "tr_ave");
  std::cout << line;
  std::snprintf(line, sizeof line, "%-8s %12zu %14.2f\n", "Before", cmp.before.tr_max, cmp.before.tr_ave);
  std::cout << line;
  std::snprintf(line, sizeof line, "%-8s %12zu %14.2f\n", "After", cmp.after.tr_max, cmp.after.tr_ave);
  std::cout << line;

  if (!a.labels.empty()) {
    print_metrics(score(std::set<std::string>(report.suspects.begin(), report.suspects.end()),
                        read_labels_file(a.labels), analysis_universe(before)));
  } else if (report.metrics) {
    print_metrics(*report.metrics);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-based hardware Trojan detection and test generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(htdet::kToolVersion));

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate a .bench netlist into a waveform store");
  s->add_option("--netlist", sim.netlist, "ISCAS .bench netlist")->required()->check(CLI::ExistingFile);
  s->add_option("--cycles", sim.cycles, "Clock cycles")->capture_default_str();
  s->add_option("--seed", sim.seed, "Stimulus seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output waveform store (.htdw)")->required();
  s->add_option("--spec", sim.spec, "Stimulus spec JSON (default: all inputs random)")->check(CLI::ExistingFile);

  ImportArgs imp;
  auto* v = app.add_subcommand("import-vcd", "Resample a VCD dump into a waveform store");
  v->add_option("--vcd", imp.vcd, "VCD file")->required()->check(CLI::ExistingFile);
  v->add_option("--scope", imp.scope, "Hierarchical scope prefix, e.g. tb.dut");
  v->add_option("--sample-period", imp.period, "Clock period in VCD ticks")->capture_default_str();
  v->add_option("--netlist", imp.netlist, "Netlist giving wire roles")->check(CLI::ExistingFile);
  v->add_option("--out", imp.out, "Output waveform store (.htdw)")->required();

  DetectArgs det;
  auto* d = app.add_subcommand("detect", "Cluster wire entropies and report suspicious wires");
  d->add_option("--waves", det.waves, "Waveform store")->required()->check(CLI::ExistingFile);
  d->add_option("--radius", det.radius, "DBSCAN radius")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("--minpts", det.min_pts, "DBSCAN MinPts")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("--report", det.report, "Output report JSON")->required();
  d->add_option("--labels", det.labels, "Trojan wire labels")->check(CLI::ExistingFile);
  d->add_option("--space", det.space, "Clustering coordinate")
      ->capture_default_str()
      ->check(CLI::IsMember({"entropy", "probability"}));
  d->add_flag("--include-low-noise", det.include_low_noise, "Also report noise below the suspicious cluster");
  d->add_flag("--no-timestamp", det.no_timestamp, "Omit the run timestamp (reproducible output)");
  d->add_option("--csv", det.csv, "Write the sorted entropy distribution as CSV");

  TestgenArgs tg;
  auto* t = app.add_subcommand("testgen", "Pick strongly correlated inputs and write a constrained spec");
  t->add_option("--waves", tg.waves, "Baseline waveform store")->required()->check(CLI::ExistingFile);
  t->add_option("--report", tg.report, "Detection report")->required()->check(CLI::ExistingFile);
  t->add_option("--out", tg.out, "Output stimulus spec JSON")->required();
  t->add_option("--hold-value", tg.hold, "Constant for non-selected inputs")
      ->capture_default_str()
      ->check(CLI::IsMember({"0", "1", "majority"}));
  t->add_option("--strategy", tg.strategy, "Cover algorithm")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "exact", "greedy"}));
  t->add_option("--seed", tg.seed, "Spec seed (default: baseline seed)");
  t->add_option("--cycles", tg.cycles, "Spec cycles (default: baseline cycles)");
  t->add_flag("--annotate-report", tg.annotate, "Add a testgen section to the report");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Compare suspect transitions before/after and score labels");
  e->add_option("--before", ev.before, "Full-random waveform store")->required()->check(CLI::ExistingFile);
  e->add_option("--after", ev.after, "Constrained-random waveform store")->required()->check(CLI::ExistingFile);
  e->add_option("--report", ev.report, "Detection report")->required()->check(CLI::ExistingFile);
  e->add_option("--labels", ev.labels, "Trojan wire labels")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (*s) return cmd_simulate(sim, *s);
    if (*v) return cmd_import(imp);
    if (*d) return cmd_detect(det);
    if (*t) return cmd_testgen(tg, *t);
    if (*e) return cmd_eval(ev);
  } catch (const htdet::Error& err) {
    std::cerr << "htdet: error: " << htdet::to_string(err.code()) << ": " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "htdet: error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
