#include "cealg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cealg/augmentation.hpp"
#include "cealg/io/assignment_document.hpp"
#include "cealg/io/config_document.hpp"
#include "cealg/io/count_document.hpp"
#include "cealg/io/dga_document.hpp"
#include "cealg/io/report.hpp"
#include "cealg/mc_bridge.hpp"
#include "cealg/pearly.hpp"
#include "cealg/surgery.hpp"

namespace cealg {

namespace {

using io::Json;
using io::Report;

/// Thrown once an input error has been recorded on the report.
struct InputAbort {};

std::string error_kind(const Error& e) {
  if (dynamic_cast<const FieldMismatch*>(&e)) return "field";
  if (dynamic_cast<const QuotientError*>(&e)) return "quotient";
  if (dynamic_cast<const DgaError*>(&e)) return "dga";
  if (dynamic_cast<const SupportError*>(&e)) return "support";
  if (dynamic_cast<const BoundExceeded*>(&e)) return "bound";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  return "error";
}

std::string read_input(Report& report, const std::string& role, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    report.add_error("io", "cannot read " + role + " file '" + path + "'");
    throw InputAbort{};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  report.add_input(role, path, text);
  return text;
}

template <typename Parse>
auto parse_or_abort(Report& report, const std::string& role, Parse parse) {
  try {
    return parse();
  } catch (const io::ParseFailure& e) {
    report.add_parse_errors(role, e.errors());
  } catch (const Error& e) {
    report.add_error(error_kind(e), e.what());
  }
  throw InputAbort{};
}

void write_output(Report& report, const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    report.add_error("io", "cannot write '" + path + "'");
    throw InputAbort{};
  }
}

Json values_json(const std::map<std::string, Scalar>& values) {
  Json j = Json::object();
  for (const auto& [name, v] : values) j[name] = v.value();
  return j;
}

Json ledger_json(const TreeLedger& l) {
  return Json{{"m", l.m}, {"k", l.k}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"telescoped", l.telescoped}};
}

Json ledger_json(const TrajectoryLedger& l) {
  return Json{{"K", l.K},     {"m0", l.m0},   {"m1", l.m1},   {"M", l.M},
              {"k", l.k},     {"l", l.l},     {"lhs", l.lhs}, {"rhs", l.rhs},
              {"telescoped", l.telescoped}};
}

// ---------------------------------------------------------------------------

struct Options {
  std::string format = "text";
  std::string file;
  std::string second;  // --augmentation, --cochain, --base-aug
  std::string b0, b1;
  std::string output;
  std::optional<unsigned> field;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> max_vars;
  bool list = false;
  unsigned workers = 1;
  std::optional<std::string> global;
  std::string family = "trees";
  TreeSearchBounds tree_bounds;
  TrajectorySearchBounds traj_bounds;
  std::uint64_t max_configurations = SearchLimits{}.max_configurations;
  std::string dir;
};

void cmd_validate(const Options& o, Report& r) {
  const auto text = read_input(r, "dga", o.file);
  const auto doc = parse_or_abort(r, "dga", [&] { return io::parse_dga_document(text); });
  const auto dga = parse_or_abort(r, "dga", [&] { return io::to_dga(doc); });
  r.result()["field"] = dga.field().characteristic();
  r.result()["ddeg"] = dga.d_degree();
  r.result()["generators"] = dga.generators().size();
  r.result()["differentials"] = dga.differentials().size();
  r.add_violations(validate_d_squared(dga));
  r.add_violations(validate_grading(dga));
  r.add_violations(validate_action(dga));
  if (!o.second.empty()) {
    const auto atext = read_input(r, "augmentation", o.second);
    const auto adoc = parse_or_abort(r, "augmentation", [&] { return io::parse_assignment_document(atext); });
    const auto e = io::to_augmentation(adoc, dga.field());
    const auto check = check_augmentation(dga, e);
    r.result()["augmentation"] = check.ok() ? "valid" : "invalid";
    r.add_violations(check);
  }
}

void cmd_augment(const Options& o, Report& r) {
  const auto text = read_input(r, "dga", o.file);
  std::optional<Field> field;
  if (o.field) {
    try {
      field = Field(*o.field);
    } catch (const Error& e) {
      r.add_error("field", e.what());
      throw InputAbort{};
    }
  }
  const auto doc = parse_or_abort(r, "dga", [&] { return io::parse_dga_document(text, field); });
  const auto dga = parse_or_abort(r, "dga", [&] { return io::to_dga(doc); });
  r.add_violations(validate_d_squared(dga));
  r.add_violations(validate_grading(dga));

  EnumerationOptions opts;
  opts.max_variables = o.max_vars;
  opts.collect = o.list;
  opts.collect_limit = o.limit.value_or(0);
  opts.workers = o.workers;
  const auto result = parse_or_abort(r, "dga", [&] { return enumerate_augmentations(dga, opts); });
  r.result()["field"] = dga.field().characteristic();
  r.result()["variables"] = result.variables;
  r.result()["count"] = result.count;
  r.result()["summary"] = std::to_string(result.count) + " augmentation" + (result.count == 1 ? "" : "s");
  if (o.list) {
    Json list = Json::array();
    for (const auto& e : result.augmentations) list.push_back(values_json(e.values()));
    r.result()["augmentations"] = list;
    r.result()["truncated"] = result.truncated;
  }
}

void report_rejections(Report& r, const io::CountDocument& doc, const std::vector<Rejection>& rejected,
                       const std::vector<std::size_t>& lines) {
  Json list = Json::array();
  for (const auto& rej : rejected) {
    const std::string where = "line " + std::to_string(lines.at(rej.entry));
    list.push_back(Json{{"line", lines.at(rej.entry)}, {"reason", rej.reason}});
    r.add_violation("rejected-entry", where, rej.reason);
  }
  (void)doc;
  r.result()["rejected"] = list;
}

io::CountDocument read_counts(const Options& o, Report& r) {
  const auto text = read_input(r, "counts", o.file);
  return parse_or_abort(r, "counts", [&] { return io::parse_count_document(text); });
}

void cmd_ce_lift(const Options& o, Report& r) {
  const auto doc = read_counts(o, r);
  const auto loaded = parse_or_abort(r, "counts", [&] { return io::load_disk_table(doc); });
  report_rejections(r, doc, loaded.rejected, doc.count_lines);
  const Dga ce = derive_ce(loaded.table);
  const std::string text = io::serialize_dga_document(io::to_document(ce));
  r.result()["double_points"] = loaded.table.double_points().size();
  r.result()["entries"] = loaded.table.counts().size();
  r.result()["generators"] = ce.generators().size();
  if (!o.output.empty()) {
    write_output(r, o.output, text);
    r.result()["output"] = o.output;
  } else {
    r.result()["ce"] = text;
  }
}

BoundingCochain read_cochain(const std::string& path, const std::string& role, Field field, Report& r) {
  if (path.empty()) return BoundingCochain(field);
  const auto text = read_input(r, role, path);
  const auto doc = parse_or_abort(r, role, [&] { return io::parse_assignment_document(text); });
  return io::to_cochain(doc, field);
}

void cmd_mc_check(const Options& o, Report& r) {
  const auto doc = read_counts(o, r);
  const auto loaded = parse_or_abort(r, "counts", [&] { return io::load_disk_table(doc); });
  report_rejections(r, doc, loaded.rejected, doc.count_lines);
  const auto& table = loaded.table;
  const auto b = read_cochain(o.second, "cochain", table.field(), r);
  const auto residual = parse_or_abort(r, "cochain", [&] { return mc_residual(table, b); });

  Json res = Json::object();
  bool solves = true;
  for (const auto& [y, v] : residual) {
    res[y] = v.value();
    if (!v.is_zero()) {
      solves = false;
      r.add_violation("maurer-cartan", y, "Maurer-Cartan residual at " + y + " is " + std::to_string(v.value()));
    }
  }
  const bool identity = verify_prop_bc_aug(table, b);
  if (!identity)
    r.add_violation("bridge-identity", "table", "Maurer-Cartan residual differs from e_b(d y) on some generator");
  const Augmentation e = eps_from_b(b);
  const bool is_aug = check_augmentation(derive_ce(table), e).ok();
  r.result()["residual"] = res;
  r.result()["solves_maurer_cartan"] = solves;
  r.result()["identity_holds"] = identity;
  r.result()["augmentation"] = values_json(e.values());
  r.result()["augmentation_valid"] = is_aug;
}

Json matrix_json(const ChordMatrix& m) {
  Json entries = Json::array();
  for (std::size_t row = 0; row < m.size(); ++row)
    for (std::size_t col = 0; col < m.size(); ++col)
      if (!m.at(row, col).is_zero())
        entries.push_back(Json{{"out", m.basis()[row]}, {"in", m.basis()[col]}, {"value", m.at(row, col).value()}});
  return entries;
}

void cmd_deform(const Options& o, Report& r) {
  const auto doc = read_counts(o, r);
  const auto loaded = parse_or_abort(r, "counts", [&] { return io::load_strip_table(doc); });
  report_rejections(r, doc, loaded.rejected, doc.strip_lines);
  const auto& table = loaded.table;
  const auto b0 = read_cochain(o.b0, "b0", table.field(), r);
  const auto b1 = read_cochain(o.b1, "b1", table.field(), r);
  const auto m1 = parse_or_abort(r, "counts", [&] { return deformed_differential(table, b0, b1); });
  const auto weighted = augmented_differential(table, eps_from_b(b0), eps_from_b(b1));
  const auto squared = check_squared_zero(table, b0, b1);
  r.add_violations(squared);
  if (!(m1 == weighted))
    r.add_violation("weighting", "m1", "cochain-weighted and augmentation-weighted differentials differ");
  Json basis = Json::array();
  for (const auto& c : m1.basis()) basis.push_back(c);
  r.result()["basis"] = basis;
  r.result()["m1"] = matrix_json(m1);
  r.result()["squares_to_zero"] = squared.ok();
  r.result()["weightings_agree"] = m1 == weighted;
}

void cmd_surgery(const Options& o, Report& r) {
  const auto text = read_input(r, "dga", o.file);
  const auto doc = parse_or_abort(r, "dga", [&] { return io::parse_dga_document(text); });
  std::optional<SurgeryAlgebra> s;
  try {
    s = io::to_surgery_algebra(doc);
  } catch (const QuotientError& e) {
    r.add_violation("quotient", e.generator(), e.what());
    return;
  } catch (const Error& e) {
    r.add_error(error_kind(e), e.what());
    throw InputAbort{};
  }
  r.result()["k"] = s->k();
  r.result()["base_chords"] = s->base_names();
  ValidationReport shape = validate_surgery_shape(*s);
  shape.merge(validate_d_squared(s->algebra()));
  r.add_violations(shape);
  if (!shape.ok()) return;

  const Dga base = s->base_ce();
  std::vector<Augmentation> bases;
  if (!o.second.empty()) {
    const auto atext = read_input(r, "base-augmentation", o.second);
    const auto adoc = parse_or_abort(r, "base-augmentation", [&] { return io::parse_assignment_document(atext); });
    bases.push_back(io::to_augmentation(adoc, base.field()));
    const auto check = check_augmentation(base, bases.front());
    if (!check.ok()) {
      for (const auto& v : check.violations) r.add_violation("base-augmentation", v.subject, v.message);
      return;
    }
  } else {
    EnumerationOptions opts;
    opts.workers = o.workers;
    bases = parse_or_abort(r, "dga", [&] { return enumerate_augmentations(base, opts); }).augmentations;
  }

  Json certificates = Json::array();
  std::size_t certified = 0;
  for (const auto& eb : bases) {
    const auto cert = construct_surgery_augmentation(*s, eb);
    ValidationReport check = verify_certificate(*s, cert, eb);
    for (const auto& c : cert.degree_conflicts)
      check.add("degree-conflict", c, "the recursion needs a nonzero value on " + c + ", which has nonzero degree");
    r.add_violations(check);
    if (check.ok()) ++certified;
    certificates.push_back(Json{{"base", values_json(eb.values())},
                                {"augmentation", values_json(cert.augmentation.values())},
                                {"verified", check.ok()}});
  }
  r.result()["base_augmentations"] = bases.size();
  r.result()["certified"] = certified;
  r.result()["certificates"] = certificates;
}

void cmd_quotient(const Options& o, Report& r) {
  const auto text = read_input(r, "dga", o.file);
  auto doc = parse_or_abort(r, "dga", [&] { return io::parse_dga_document(text); });
  const auto dga = parse_or_abort(r, "dga", [&] { return io::to_dga(doc); });
  std::optional<Dga> q;
  try {
    q = quotient_order_reversing(dga, OrderReversingMarking{doc.marked});
  } catch (const QuotientError& e) {
    r.add_violation("quotient", e.generator(), e.what());
    return;
  }
  r.add_violations(validate_d_squared(*q));
  io::DgaDocument out = io::to_document(*q);
  for (const auto& [name, lab] : doc.surgery)
    if (!doc.marked.contains(name)) out.surgery.emplace(name, lab);
  const std::string serialized = io::serialize_dga_document(out);
  r.result()["removed"] = Json(std::vector<std::string>(doc.marked.begin(), doc.marked.end()));
  r.result()["generators"] = q->generators().size();
  if (!o.output.empty()) {
    write_output(r, o.output, serialized);
    r.result()["output"] = o.output;
  } else {
    r.result()["quotient"] = serialized;
  }
}

io::ConfigDocument read_config(const Options& o, Report& r) {
  const auto text = read_input(r, "config", o.file);
  return parse_or_abort(r, "config", [&] { return io::parse_config_document(text); });
}

void cmd_tree_check(const Options& o, Report& r) {
  const auto doc = read_config(o, r);
  const auto t = parse_or_abort(r, "config", [&] { return io::to_tree_config(doc); });
  bool global = doc.global.value_or(true);
  if (o.global) global = *o.global == "on";
  const auto v = degeneration_verdict_tree(t, global);
  r.add_violations(v.hypotheses);
  if (!v.has_verdict()) {
    try {
      r.result()["ledger"] = ledger_json(tree_ledger(t));
    } catch (const ConfigError&) {
    }
    return;
  }
  if (!v.ledger.telescoped)
    r.add_violation("telescoping", "tree", "degree ledger lhs " + std::to_string(v.ledger.lhs) + " != rhs " +
                                               std::to_string(v.ledger.rhs));
  r.result()["ledger"] = ledger_json(v.ledger);
  Json verdict;
  verdict["positivity_propagates"] = v.positivity_propagates;
  verdict["output_positive"] = v.output_positive;
  verdict["global_constraint_imposed"] = v.global_constraint_imposed;
  verdict["global_constraint_holds"] = v.global_constraint_holds;
  verdict["forced_m"] = v.forced_m ? Json(*v.forced_m) : Json(nullptr);
  verdict["single_disk"] = v.single_disk;
  std::string conclusion;
  if (!global) conclusion = "no global constraint imposed";
  else if (v.global_constraint_holds) conclusion = "single disk with positive output";
  else conclusion = "global degree constraint fails: not a rigid configuration";
  verdict["conclusion"] = conclusion;
  r.result()["verdict"] = verdict;
}

void cmd_traj_check(const Options& o, Report& r) {
  const auto doc = read_config(o, r);
  const auto b = parse_or_abort(r, "config", [&] { return io::to_trajectory_config(doc); });
  const auto v = degeneration_verdict_traj(b);
  r.add_violations(v.hypotheses);
  if (!v.has_verdict()) {
    try {
      r.result()["ledger"] = ledger_json(trajectory_ledger(b));
    } catch (const ConfigError&) {
    }
    return;
  }
  if (!v.ledger.telescoped)
    r.add_violation("telescoping", "trajectory", "degree ledger lhs " + std::to_string(v.ledger.lhs) + " != rhs " +
                                                     std::to_string(v.ledger.rhs));
  r.result()["ledger"] = ledger_json(v.ledger);
  Json verdict;
  verdict["global_constraint_holds"] = v.global_constraint_holds;
  verdict["forced_M"] = v.forced_M ? Json(*v.forced_M) : Json(nullptr);
  verdict["unbroken"] = v.unbroken;
  verdict["conclusion"] = v.global_constraint_holds ? "unbroken: one strip, no attached disks"
                                                    : "global degree constraint fails: not a rigid trajectory";
  r.result()["verdict"] = verdict;
}

Json search_json(const CounterexampleReport& c) {
  Json j;
  j["estimate"] = c.estimate;
  j["shapes"] = c.shapes;
  j["enumerated"] = c.enumerated;
  Json by = Json::object();
  for (const auto& [m, n] : c.by_components) by[std::to_string(m)] = n;
  j["by_components"] = by;
  j["global_constraint_hits"] = c.global_constraint_hits;
  j["telescoping_failures"] = c.telescoping_failures;
  j["counterexample_count"] = c.counterexample_count;
  j["counterexamples"] = c.counterexamples;
  return j;
}

void record_search(Report& r, const CounterexampleReport& c) {
  if (c.counterexample_count)
    r.add_violation("counterexample", c.family,
                    std::to_string(c.counterexample_count) + " configurations meet the global constraint with " +
                        "two or more components");
  if (c.telescoping_failures)
    r.add_violation("telescoping", c.family, std::to_string(c.telescoping_failures) + " ledger mismatches");
  if (c.enumerated != c.estimate)
    r.add_violation("estimate-mismatch", c.family,
                    "enumerated " + std::to_string(c.enumerated) + " of " + std::to_string(c.estimate) + " estimated");
}

void cmd_search(const Options& o, Report& r, std::ostream& err) {
  if (o.family != "trees" && o.family != "trajectories" && o.family != "all") {
    r.add_error("usage", "--family must be trees, trajectories or all");
    throw InputAbort{};
  }
  SearchLimits limits;
  limits.max_configurations = o.max_configurations;
  limits.workers = o.workers;
  const auto note = [&](const std::string& family) {
    return [&, family](std::uint64_t n) { err << "estimate: " << n << " " << family << " configurations\n"; };
  };
  const auto guarded = [&](const std::string& family, auto&& run) {
    try {
      return run();
    } catch (const Error& e) {
      r.result()[family] = Json{{"refused", e.what()}};
      r.add_error(error_kind(e), e.what());
      throw InputAbort{};
    }
  };
  if (o.family != "trajectories") {
    const auto& b = o.tree_bounds;
    const auto c = guarded("trees", [&] { return exhaustive_search_trees(b, limits, note("tree")); });
    Json j;
    j["bounds"] = Json{{"max_disks", b.max_disks},
                       {"max_inputs_per_disk", b.max_inputs_per_disk},
                       {"min_degree", b.min_degree},
                       {"max_degree", b.max_degree}};
    j.update(search_json(c));
    r.result()["trees"] = j;
    record_search(r, c);
  }
  if (o.family != "trees") {
    const auto& b = o.traj_bounds;
    const auto c =
        guarded("trajectories", [&] { return exhaustive_search_trajectories(b, limits, note("trajectory")); });
    Json j;
    j["bounds"] = Json{{"max_strips", b.max_strips},
                       {"max_attached_disks", b.max_attached_disks},
                       {"max_marked_per_strip", b.max_marked_per_strip},
                       {"max_marked_total", b.max_marked_total},
                       {"max_inputs_per_disk", b.max_inputs_per_disk},
                       {"min_degree", b.min_degree},
                       {"max_degree", b.max_degree}};
    j.update(search_json(c));
    r.result()["trajectories"] = j;
    record_search(r, c);
  }
}

// -- corpus -------------------------------------------------------------------

struct ManifestEntry {
  std::size_t line = 0;
  int expected = 0;
  std::string tag;
  std::vector<std::string> args;
};

bool has_tag(const Json& report, const std::string& tag) {
  for (const auto& v : report["violations"])
    if (v["check"] == tag) return true;
  for (const auto& e : report["errors"])
    if (e["kind"] == tag) return true;
  return false;
}

/// Parses a corpus file by extension and checks that serialising is stable.
/// Returns nullopt for files that are not corpus documents.
std::optional<std::string> round_trip(const std::filesystem::path& path, const std::string& text) {
  const auto ext = path.extension().string();
  try {
    if (ext == ".dga") {
      const auto doc = io::parse_dga_document(text);
      const auto canon = io::serialize_dga_document(doc);
      const auto again = io::parse_dga_document(canon);
      if (!(again == doc)) return "parse(serialize(doc)) differs from doc";
      if (io::serialize_dga_document(again) != canon) return "serialisation is not stable";
      return "";
    }
    if (ext == ".counts") {
      const auto doc = io::parse_count_document(text);
      const auto canon = io::serialize_count_document(doc);
      if (io::serialize_count_document(io::parse_count_document(canon)) != canon) return "serialisation is not stable";
      return "";
    }
    if (ext == ".set") {
      const auto doc = io::parse_assignment_document(text);
      std::string canon;
      for (const auto& [n, v] : doc.values) canon += "set " + n + " = " + std::to_string(v) + "\n";
      const auto again = io::parse_assignment_document(canon);
      if (again.values != doc.values) return "parse(serialize(doc)) differs from doc";
      return "";
    }
    if (ext == ".cfg") {
      const auto doc = io::parse_config_document(text);
      const auto canon = io::serialize_config_document(doc);
      if (io::serialize_config_document(io::parse_config_document(canon)) != canon) return "serialisation is not stable";
      return "";
    }
  } catch (const io::ParseFailure&) {
    return "";  // fault-injected syntax; covered by the manifest
  }
  return std::nullopt;
}

void cmd_corpus(const Options& o, Report& r, std::ostream& err) {
  namespace fs = std::filesystem;
  const fs::path dir = o.dir.empty() ? fs::path(CEALG_CORPUS_DIR) : fs::path(o.dir);
  const auto manifest_path = (dir / "manifest.txt").string();
  const auto text = read_input(r, "manifest", manifest_path);

  std::vector<ManifestEntry> entries;
  {
    std::istringstream lines(text);
    std::string raw;
    std::size_t number = 0;
    io::Diagnostics diag;
    while (std::getline(lines, raw)) {
      ++number;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      std::istringstream words(raw);
      std::vector<std::string> tokens;
      for (std::string w; words >> w;) tokens.push_back(w);
      if (tokens.empty()) continue;
      const auto code = io::parse_integer(tokens[0]);
      if (tokens.size() < 3 || !code || *code < 0 || *code > 2) {
        diag.error_at(number, 1, "expected '<exit code> <tag|-> <command> <args>*'");
        continue;
      }
      ManifestEntry e{number, static_cast<int>(*code), tokens[1] == "-" ? "" : tokens[1], {}};
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        std::string arg = tokens[i];
        if (arg.starts_with("@")) arg = (dir / arg.substr(1)).string();
        e.args.push_back(arg);
      }
      entries.push_back(std::move(e));
    }
    try {
      diag.throw_if_any();
    } catch (const io::ParseFailure& e) {
      r.add_parse_errors("manifest", e.errors());
      throw InputAbort{};
    }
  }

  Json runs = Json::array();
  std::size_t passed = 0;
  for (const auto& e : entries) {
    std::vector<std::string> args = e.args;
    args.insert(args.begin() + 1, {"--format", "json"});
    std::ostringstream out, notes;
    const int code = run_cli(args, out, notes);
    Json report;
    try {
      report = Json::parse(out.str());
    } catch (const std::exception&) {
      report = Json{{"violations", Json::array()}, {"errors", Json::array()}};
    }
    const bool tag_ok = e.tag.empty() || has_tag(report, e.tag);
    const bool ok = code == e.expected && tag_ok;
    if (ok) ++passed;
    else
      r.add_violation("corpus", "manifest line " + std::to_string(e.line),
                      "expected exit " + std::to_string(e.expected) + (e.tag.empty() ? "" : " with " + e.tag) +
                          ", got exit " + std::to_string(code) + (tag_ok ? "" : " without it"));
    std::string command;
    for (const auto& a : e.args) command += (command.empty() ? "" : " ") + fs::path(a).filename().string();
    runs.push_back(Json{{"line", e.line}, {"command", command}, {"expected", e.expected}, {"exit", code}, {"ok", ok}});
    err << (ok ? "ok   " : "FAIL ") << command << "\n";
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::size_t round_trips = 0;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const auto problem = round_trip(path, buffer.str());
    if (!problem) continue;
    ++round_trips;
    if (!problem->empty()) r.add_violation("round-trip", path.filename().string(), *problem);
  }
  r.result()["runs"] = runs;
  r.result()["passed"] = passed;
  r.result()["total"] = entries.size();
  r.result()["round_trip_files"] = round_trips;
}

void emit(const Report& r, const std::string& format, std::ostream& out) {
  const Json j = r.to_json();
  if (format == "json") out << j.dump(2) << "\n";
  else out << io::render_text(j);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chekanov-Eliashberg algebras, augmentations and bounding cochains", "cealg"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));

  auto* validate = app.add_subcommand("validate", "Check d^2 = 0, grading and the action filtration");
  validate->add_option("file", o.file, "DGA document")->required();
  validate->add_option("--augmentation", o.second, "Also check this augmentation");

  auto* augment = app.add_subcommand("augment", "Count or list augmentations");
  augment->add_option("file", o.file, "DGA document")->required();
  augment->add_option("--field", o.field, "Reduce coefficients into F_p instead of the declared field");
  augment->add_option("--limit", o.limit, "List at most this many");
  augment->add_flag("--list", o.list, "List the augmentations");
  augment->add_option("--max-vars", o.max_vars, "Refuse above this many degree-0 generators");
  augment->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 64u));

  auto* ce_lift = app.add_subcommand("ce-lift", "Derive the Chekanov-Eliashberg algebra from disk counts");
  ce_lift->add_option("file", o.file, "Count document")->required();
  ce_lift->add_option("--output", o.output, "Write the DGA document here");

  auto* mc = app.add_subcommand("mc-check", "Maurer-Cartan residual and the cochain/augmentation identity");
  mc->add_option("file", o.file, "Count document")->required();
  mc->add_option("--cochain", o.second, "Bounding cochain (set lines)")->required();

  auto* deform = app.add_subcommand("deform", "Deformed strip differential and its square");
  deform->add_option("file", o.file, "Count document with strip entries")->required();
  deform->add_option("--b0", o.b0, "Bounding cochain of L0");
  deform->add_option("--b1", o.b1, "Bounding cochain of L1");

  auto* surgery = app.add_subcommand("surgery", "Shape check and augmentation construction for a surgery algebra");
  surgery->add_option("file", o.file, "DGA document with surgery labels")->required();
  surgery->add_option("--base-aug", o.second, "Base augmentation; default is every base augmentation");
  surgery->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 64u));

  auto* quotient = app.add_subcommand("quotient", "Quotient by the marked order-reversing chords");
  quotient->add_option("file", o.file, "DGA document with mark lines")->required();
  quotient->add_option("--output", o.output, "Write the quotient document here");

  auto* tree = app.add_subcommand("tree-check", "Degree ledger and verdict for a pearly tree");
  tree->add_option("file", o.file, "Configuration document")->required();
  tree->add_option("--global", o.global, "Impose the global degree constraint (on|off)")
      ->check(CLI::IsMember({"on", "off"}));

  auto* traj = app.add_subcommand("traj-check", "Degree ledger and verdict for a broken trajectory");
  traj->add_option("file", o.file, "Configuration document")->required();

  auto* search = app.add_subcommand("search", "Exhaustive counterexample search");
  search->add_option("--family", o.family, "trees, trajectories or all");
  search->add_option("--max-disks", o.tree_bounds.max_disks, "Trees: disks per configuration");
  search->add_option("--max-inputs", o.tree_bounds.max_inputs_per_disk, "Inputs per disk");
  search->add_option("--min-degree", o.tree_bounds.min_degree, "Lowest generator degree");
  search->add_option("--max-degree", o.tree_bounds.max_degree, "Highest generator degree");
  search->add_option("--max-strips", o.traj_bounds.max_strips, "Trajectories: strips");
  search->add_option("--max-attached", o.traj_bounds.max_attached_disks, "Trajectories: attached disks");
  search->add_option("--max-marked-per-strip", o.traj_bounds.max_marked_per_strip, "Trajectories: marked points per strip");
  search->add_option("--max-marked", o.traj_bounds.max_marked_total, "Trajectories: marked points in total");
  search->add_option("--limit", o.max_configurations, "Refuse above this many configurations");
  search->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 64u));

  auto* corpus = app.add_subcommand("corpus", "Run the bundled example suite");
  corpus->add_option("--dir", o.dir, "Corpus directory");

  std::vector<const char*> argv{"cealg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  // Shared degree range and input bound for both search families.
  o.traj_bounds.min_degree = o.tree_bounds.min_degree;
  o.traj_bounds.max_degree = o.tree_bounds.max_degree;
  o.traj_bounds.max_inputs_per_disk = o.tree_bounds.max_inputs_per_disk;

  auto* sub = app.get_subcommands().front();
  Report report(sub->get_name());
  try {
    const std::string name = sub->get_name();
    if (name == "validate") cmd_validate(o, report);
    else if (name == "augment") cmd_augment(o, report);
    else if (name == "ce-lift") cmd_ce_lift(o, report);
    else if (name == "mc-check") cmd_mc_check(o, report);
    else if (name == "deform") cmd_deform(o, report);
    else if (name == "surgery") cmd_surgery(o, report);
    else if (name == "quotient") cmd_quotient(o, report);
    else if (name == "tree-check") cmd_tree_check(o, report);
    else if (name == "traj-check") cmd_traj_check(o, report);
    else if (name == "search") cmd_search(o, report, err);
    else if (name == "corpus") cmd_corpus(o, report, err);
  } catch (const InputAbort&) {
  } catch (const Error& e) {
    report.add_error(error_kind(e), e.what());
  }
  emit(report, o.format, out);
  return report.exit_code();
}

}  // namespace cealg
