#include "cealg/io/config_document.hpp"

#include <map>
#include <set>

namespace cealg::io {

namespace {

/// Names after `from` up to (not including) a token in `stops`.
std::size_t read_names(const Line& line, std::size_t from, const std::set<std::string>& stops,
                       std::vector<std::string>& out, Diagnostics& diag, bool& ok) {
  std::size_t i = from;
  for (; i < line.tokens.size(); ++i) {
    const auto& text = line.tokens[i].text;
    if (stops.contains(text) && i + 1 < line.tokens.size() && line.tokens[i + 1].text == ":") break;
    if (!is_valid_name(text)) {
      diag.error(line, i, "'" + text + "' is not a generator name");
      ok = false;
      continue;
    }
    out.push_back(text);
  }
  return i;
}

}  // namespace

ConfigDocument parse_config_document(std::string_view text) {
  Diagnostics diag;
  ConfigDocument doc;
  std::map<std::string, std::size_t> gens_at, components_at;
  std::set<std::string> strip_names, attached;
  std::vector<std::pair<const Line*, std::vector<std::pair<std::size_t, std::string>>>> name_uses;
  std::vector<std::pair<const Line*, ConfigDocument::AttachLine>> attach_lines;
  std::optional<std::size_t> bare_line, global_line;

  const auto lines = tokenize(text);
  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const std::string& directive = t[0].text;
    std::vector<std::pair<std::size_t, std::string>> uses;
    const auto declare_component = [&](std::size_t i) {
      if (!is_valid_name(t[i].text)) {
        diag.error(line, i, "'" + t[i].text + "' is not a valid component name");
        return false;
      }
      if (auto [it, inserted] = components_at.emplace(t[i].text, line.number); !inserted) {
        diag.error(line, i, "component " + t[i].text + " already declared on line " + std::to_string(it->second));
        return false;
      }
      return true;
    };

    if (directive == "gen") {
      auto g = parse_generator(line, diag);
      if (!g) continue;
      if (auto [it, inserted] = gens_at.emplace(g->name, line.number); !inserted) {
        diag.error(line, 1, "generator " + g->name + " already declared on line " + std::to_string(it->second));
        continue;
      }
      doc.generators.push_back(std::move(*g));
    } else if (directive == "disk") {
      if (t.size() < 5 || t[2].text != ":" || t[4].text != "<-") {
        diag.error(line, std::min<std::size_t>(t.size(), 2), "expected 'disk <name> : <output> <- <inputs>*'");
        continue;
      }
      if (!declare_component(1)) continue;
      bool ok = true;
      ConfigDocument::DiskLine d{t[1].text, t[3].text, {}};
      read_names(line, 5, {}, d.inputs, diag, ok);
      if (!ok) continue;
      uses.push_back({3, d.output});
      for (std::size_t i = 0; i < d.inputs.size(); ++i) uses.push_back({5 + i, d.inputs[i]});
      doc.disks.push_back(std::move(d));
    } else if (directive == "strip") {
      if (t.size() < 6 || t[2].text != ":" || t[4].text != "<-") {
        diag.error(line, std::min<std::size_t>(t.size(), 2),
                   "expected 'strip <name> : <out> <- <in> [bottom: <names>] [top: <names>]'");
        continue;
      }
      if (!declare_component(1)) continue;
      ConfigDocument::StripLine s{t[1].text, t[3].text, t[5].text, {}, {}};
      uses.push_back({3, s.out});
      uses.push_back({5, s.in});
      bool ok = true;
      std::size_t i = 6;
      if (i < t.size() && t[i].text == "bottom" && i + 1 < t.size() && t[i + 1].text == ":") {
        const std::size_t start = i + 2;
        i = read_names(line, start, {"top"}, s.bottom, diag, ok);
        for (std::size_t j = 0; j < s.bottom.size(); ++j) uses.push_back({start + j, s.bottom[j]});
      }
      if (i < t.size() && t[i].text == "top" && i + 1 < t.size() && t[i + 1].text == ":") {
        const std::size_t start = i + 2;
        i = read_names(line, start, {}, s.top, diag, ok);
        for (std::size_t j = 0; j < s.top.size(); ++j) uses.push_back({start + j, s.top[j]});
      }
      if (i < t.size()) {
        diag.error(line, i, "unexpected '" + t[i].text + "' in strip line");
        ok = false;
      }
      if (!ok) continue;
      strip_names.insert(s.name);
      doc.strips.push_back(std::move(s));
    } else if (directive == "attach") {
      if (t.size() != 4 && t.size() != 5) {
        diag.error(line, std::min<std::size_t>(t.size(), 4), "expected 'attach <disk> <parent> [bottom|top] <slot>'");
        continue;
      }
      ConfigDocument::AttachLine a{t[1].text, t[2].text, std::nullopt, 1};
      if (t.size() == 5) {
        if (t[3].text == "bottom") a.side = Side::Bottom;
        else if (t[3].text == "top") a.side = Side::Top;
        else {
          diag.error(line, 3, "side must be bottom or top");
          continue;
        }
      }
      const auto slot = parse_integer(t.back().text);
      if (!slot || *slot < 1 || *slot > 1000) {
        diag.error(line, t.size() - 1, "slot '" + t.back().text + "' must be a positive integer");
        continue;
      }
      a.slot = static_cast<std::size_t>(*slot);
      attach_lines.push_back({&line, a});
    } else if (directive == "bare") {
      if (!expect_arity(line, 2, "bare <generator>", diag)) continue;
      if (bare_line) {
        diag.error(line, 0, "bare already given on line " + std::to_string(*bare_line));
        continue;
      }
      bare_line = line.number;
      doc.bare = t[1].text;
      uses.push_back({1, t[1].text});
    } else if (directive == "global") {
      if (!expect_arity(line, 2, "global on|off", diag)) continue;
      if (global_line) {
        diag.error(line, 0, "global already given on line " + std::to_string(*global_line));
        continue;
      }
      global_line = line.number;
      if (t[1].text == "on") doc.global = true;
      else if (t[1].text == "off") doc.global = false;
      else diag.error(line, 1, "expected on or off");
    } else {
      diag.error(line, 0, "unknown directive '" + directive + "'");
    }
    if (!uses.empty()) name_uses.push_back({&line, std::move(uses)});
  }

  for (const auto& [line, uses] : name_uses)
    for (const auto& [token, name] : uses)
      if (!gens_at.contains(name)) diag.error(*line, token, "undeclared generator '" + name + "'");

  for (auto& [line, a] : attach_lines) {
    const bool child_is_disk = components_at.contains(a.child) && !strip_names.contains(a.child);
    if (!child_is_disk) {
      diag.error(*line, 1, "'" + a.child + "' is not a disk");
      continue;
    }
    if (!components_at.contains(a.parent)) {
      diag.error(*line, 2, "unknown component '" + a.parent + "'");
      continue;
    }
    const bool parent_is_strip = strip_names.contains(a.parent);
    if (parent_is_strip != a.side.has_value()) {
      diag.error(*line, 2, parent_is_strip ? "attaching to a strip needs a side (bottom or top)"
                                           : "a side is only meaningful when attaching to a strip");
      continue;
    }
    if (!attached.insert(a.child).second) {
      diag.error(*line, 1, a.child + " is attached twice");
      continue;
    }
    doc.attachments.push_back(a);
  }

  diag.throw_if_any();
  return doc;
}

std::string serialize_config_document(const ConfigDocument& doc) {
  std::string out;
  for (const auto& g : doc.generators) out += "gen " + generator_line(g) + "\n";
  for (const auto& d : doc.disks) {
    out += "disk " + d.name + " : " + d.output + " <-";
    for (const auto& n : d.inputs) out += " " + n;
    out += "\n";
  }
  for (const auto& s : doc.strips) {
    out += "strip " + s.name + " : " + s.out + " <- " + s.in;
    if (!s.bottom.empty()) {
      out += " bottom:";
      for (const auto& n : s.bottom) out += " " + n;
    }
    if (!s.top.empty()) {
      out += " top:";
      for (const auto& n : s.top) out += " " + n;
    }
    out += "\n";
  }
  for (const auto& a : doc.attachments) {
    out += "attach " + a.child + " " + a.parent;
    if (a.side) out += *a.side == Side::Bottom ? " bottom" : " top";
    out += " " + std::to_string(a.slot) + "\n";
  }
  if (doc.bare) out += "bare " + *doc.bare + "\n";
  if (doc.global) out += std::string("global ") + (*doc.global ? "on" : "off") + "\n";
  return out;
}

namespace {

struct Resolved {
  std::map<std::string, Generator> gens;
  std::map<std::string, std::size_t> disk_index;
  std::map<std::string, std::size_t> strip_index;
  std::vector<DiskComponent> disks;
};

Resolved resolve(const ConfigDocument& doc) {
  Resolved r;
  for (const auto& g : doc.generators) r.gens.emplace(g.name, g);
  const auto gen = [&](const std::string& n) {
    auto it = r.gens.find(n);
    if (it == r.gens.end()) throw ConfigError("undeclared generator " + n);
    return it->second;
  };
  for (const auto& d : doc.disks) {
    DiskComponent c{gen(d.output), {}};
    for (const auto& n : d.inputs) c.inputs.push_back(gen(n));
    r.disk_index.emplace(d.name, r.disks.size());
    r.disks.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < doc.strips.size(); ++i) r.strip_index.emplace(doc.strips[i].name, i);
  return r;
}

}  // namespace

PearlyTreeConfig to_tree_config(const ConfigDocument& doc) {
  if (!doc.strips.empty()) throw ConfigError("the document describes a broken trajectory, not a pearly tree");
  Resolved r = resolve(doc);
  PearlyTreeConfig t;
  t.disks = std::move(r.disks);
  t.parent.assign(t.disks.size(), std::nullopt);
  for (const auto& a : doc.attachments)
    t.parent[r.disk_index.at(a.child)] = SlotRef{r.disk_index.at(a.parent), a.slot - 1};
  if (doc.bare) t.bare = r.gens.at(*doc.bare);
  return t;
}

BrokenTrajectoryConfig to_trajectory_config(const ConfigDocument& doc) {
  if (doc.bare) throw ConfigError("a bare edge is not part of a broken trajectory");
  Resolved r = resolve(doc);
  BrokenTrajectoryConfig b;
  for (const auto& s : doc.strips) {
    StripComponent c{r.gens.at(s.out), r.gens.at(s.in), {}, {}};
    for (const auto& n : s.bottom) c.bottom.push_back(r.gens.at(n));
    for (const auto& n : s.top) c.top.push_back(r.gens.at(n));
    b.strips.push_back(std::move(c));
  }
  b.disks = std::move(r.disks);
  std::vector<std::optional<DiskAttachment>> parent(b.disks.size());
  for (const auto& a : doc.attachments) {
    const std::size_t child = r.disk_index.at(a.child);
    if (a.side) parent[child] = MarkedRef{r.strip_index.at(a.parent), *a.side, a.slot - 1};
    else parent[child] = SlotRef{r.disk_index.at(a.parent), a.slot - 1};
  }
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (!parent[i]) throw ConfigError("disk " + doc.disks[i].name + " is not attached to the trajectory");
    b.parent.push_back(*parent[i]);
  }
  return b;
}

}  // namespace cealg::io
