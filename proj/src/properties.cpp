#include "rsmkit/properties.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace rsm {
namespace {

bool cmp(Value a, BinOp op, Value b) {
  switch (op) {
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    default: return false;
  }
}

const char* op_name(BinOp op) {
  switch (op) {
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    default: return "?";
  }
}

std::optional<BinOp> parse_op(const std::string& s) {
  if (s == "==") return BinOp::Eq;
  if (s == "!=") return BinOp::Ne;
  if (s == "<") return BinOp::Lt;
  if (s == "<=") return BinOp::Le;
  if (s == ">") return BinOp::Gt;
  if (s == ">=") return BinOp::Ge;
  return std::nullopt;
}

}  // namespace

void validate_properties(const CompiledModel& cm, const std::vector<Property>& props) {
  auto known = [&](const std::string& ch) {
    if (cm.channel_index.count(ch)) return true;
    // environment pseudo-channels: MODULE.port over an unbound port
    auto dot = ch.find('.');
    if (dot == std::string::npos) return false;
    std::string mod = ch.substr(0, dot), port = ch.substr(dot + 1);
    auto it = cm.module_index.find(mod);
    if (it == cm.module_index.end()) return false;
    size_t mi = static_cast<size_t>(it->second);
    auto in = cm.in_port_channel[mi].find(port);
    if (in != cm.in_port_channel[mi].end() && in->second < 0) return true;
    auto out = cm.out_port_channel[mi].find(port);
    return out != cm.out_port_channel[mi].end() && out->second < 0;
  };
  for (const auto& p : props) {
    switch (p.kind) {
      case Property::Kind::Invariant:
      case Property::Kind::Golden:
        if (!known(p.channel)) throw UnknownChannelError(p.channel);
        break;
      case Property::Kind::Deadline:
        if (!known(p.src_channel)) throw UnknownChannelError(p.src_channel);
        if (!known(p.dst_channel)) throw UnknownChannelError(p.dst_channel);
        break;
    }
  }
}

std::vector<DeadlineSpec> deadline_specs(const std::vector<Property>& props) {
  std::vector<DeadlineSpec> out;
  for (const auto& p : props)
    if (p.kind == Property::Kind::Deadline)
      out.push_back({p.id, p.src_channel, p.dst_channel, p.max_cycles});
  return out;
}

std::vector<PropertyResult> check_properties(const Trace& trace, const StatsReport* stats,
                                             const std::vector<Property>& props) {
  auto by = trace.by_channel();
  std::vector<PropertyResult> out;
  for (const auto& p : props) {
    PropertyResult r;
    r.id = p.id;
    switch (p.kind) {
      case Property::Kind::Invariant: {
        auto it = by.find(p.channel);
        if (it != by.end()) {
          for (size_t i = 0; i < it->second.size(); ++i) {
            if (!cmp(it->second[i], p.op, p.threshold)) {
              r.pass = false;
              r.violation_index = static_cast<std::int64_t>(i);
              r.detail = p.channel + "[" + std::to_string(i) +
                         "] = " + std::to_string(it->second[i]) + " violates " + op_name(p.op) +
                         " " + std::to_string(p.threshold);
              break;
            }
          }
        }
        break;
      }
      case Property::Kind::Golden: {
        static const std::vector<Value> kEmpty;
        auto it = by.find(p.channel);
        const std::vector<Value>& got = it == by.end() ? kEmpty : it->second;
        size_t n = std::min(got.size(), p.expected.size());
        for (size_t i = 0; i < n; ++i) {
          if (got[i] != p.expected[i]) {
            r.pass = false;
            r.violation_index = static_cast<std::int64_t>(i);
            r.detail = p.channel + "[" + std::to_string(i) + "] = " +
                       std::to_string(got[i]) + ", expected " + std::to_string(p.expected[i]);
            break;
          }
        }
        if (r.pass && got.size() != p.expected.size()) {
          r.pass = false;
          r.violation_index = static_cast<std::int64_t>(n);
          r.detail = p.channel + " has " + std::to_string(got.size()) + " records, expected " +
                     std::to_string(p.expected.size());
        }
        break;
      }
      case Property::Kind::Deadline: {
        if (!stats) {
          r.pass = false;
          r.detail = "no timing data (deadline properties need a timed run)";
          break;
        }
        bool found = false;
        for (const auto& d : stats->deadline_results) {
          if (d.property_id != p.id) continue;
          found = true;
          r.observed = d.observed;
          r.pass = d.pass;
          if (!d.pass)
            r.detail = "observed latency " + std::to_string(d.observed) + " exceeds " +
                       std::to_string(d.bound);
        }
        if (!found) {
          r.pass = false;
          r.detail = "no deadline observation for property " + p.id;
        }
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

PropertyCoverageReport pcc(const CompiledModel& cm, const std::vector<Property>& props,
                           const std::vector<Stimulus>& testbench, int jobs) {
  // only trace-evaluable properties participate
  std::vector<Property> evaluable;
  for (const auto& p : props)
    if (p.kind != Property::Kind::Deadline) evaluable.push_back(p);

  // precondition: every property passes on the fault-free runs
  std::vector<Trace> golden;
  for (const auto& stim : testbench) {
    golden.push_back(simulate_untimed(cm, stim));
    for (const auto& r : check_properties(golden.back(), nullptr, evaluable))
      if (!r.pass) throw PropertyFailsOnGoldenModel(r.id);
  }

  auto sites = enumerate_fault_sites(cm);
  PropertyCoverageReport rep;
  rep.faults_total = static_cast<std::int64_t>(sites.size());
  rep.per_fault.resize(sites.size());

  auto run_site = [&](size_t i) {
    PropertyCoverage pc;
    pc.site = sites[i];
    std::vector<std::uint8_t> failed(evaluable.size(), 0);
    for (const auto& stim : testbench) {
      std::vector<ExecHooks> hooks(cm.programs.size());
      auto& h = hooks[static_cast<size_t>(sites[i].module_idx)];
      h.fault_slot = sites[i].var_slot;
      h.fault_mask = static_cast<Value>(1u << sites[i].bit_index);
      h.fault_stuck1 = sites[i].stuck1;
      Trace t;
      try {
        t = simulate_untimed(cm, stim, &hooks);
      } catch (const RuntimeTrap&) {
        // aborted run: evaluate whatever trace exists (none)
      }
      auto results = check_properties(t, nullptr, evaluable);
      for (size_t k = 0; k < results.size(); ++k)
        if (!results[k].pass) failed[k] = 1;
    }
    for (size_t k = 0; k < evaluable.size(); ++k)
      if (failed[k]) pc.detected_by.push_back(evaluable[k].id);
    rep.per_fault[i] = std::move(pc);
  };

  int nthreads = std::max(1, jobs);
  if (nthreads == 1 || sites.size() < 64) {
    for (size_t i = 0; i < sites.size(); ++i) run_site(i);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (sites.size() + static_cast<size_t>(nthreads) - 1) /
                   static_cast<size_t>(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      size_t lo = static_cast<size_t>(t) * chunk;
      size_t hi = std::min(sites.size(), lo + chunk);
      if (lo >= hi) continue;
      pool.emplace_back([&, lo, hi] {
        for (size_t i = lo; i < hi; ++i) run_site(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& pc : rep.per_fault) {
    if (pc.detected_by.empty())
      rep.undetected.push_back(pc.site);
    else
      ++rep.faults_detected;
  }
  rep.property_coverage_pct =
      rep.faults_total ? static_cast<double>(rep.faults_detected) /
                             static_cast<double>(rep.faults_total)
                       : 0.0;
  return rep;
}

std::vector<Property> parse_properties(const std::string& text, Diagnostics& diags) {
  std::vector<Property> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    Property p;
    p.id = "p" + std::to_string(out.size() + 1);
    if (kw == "invariant") {
      std::string opstr;
      long long v;
      if (!(ss >> p.channel >> opstr >> v)) {
        diags.push_back({Severity::Error, {lineno, 1}, "malformed invariant property"});
        continue;
      }
      auto op = parse_op(opstr);
      if (!op) {
        diags.push_back({Severity::Error, {lineno, 1}, "unknown comparison '" + opstr + "'"});
        continue;
      }
      p.kind = Property::Kind::Invariant;
      p.op = *op;
      p.threshold = static_cast<Value>(v);
    } else if (kw == "deadline") {
      long long v;
      if (!(ss >> p.src_channel >> p.dst_channel >> v)) {
        diags.push_back({Severity::Error, {lineno, 1}, "malformed deadline property"});
        continue;
      }
      p.kind = Property::Kind::Deadline;
      p.max_cycles = v;
    } else if (kw == "golden") {
      if (!(ss >> p.channel)) {
        diags.push_back({Severity::Error, {lineno, 1}, "malformed golden property"});
        continue;
      }
      p.kind = Property::Kind::Golden;
      long long v;
      while (ss >> v) p.expected.push_back(static_cast<Value>(v));
      if (!ss.eof()) {
        diags.push_back({Severity::Error, {lineno, 1}, "malformed golden value list"});
        continue;
      }
    } else {
      diags.push_back(
          {Severity::Error, {lineno, 1}, "expected invariant, deadline or golden"});
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Property> parse_property_file(const std::string& path, Diagnostics& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diags.push_back({Severity::Error, {0, 0}, "cannot open property file: " + path});
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_properties(ss.str(), diags);
}

std::vector<Property> golden_properties(const Trace& golden) {
  std::vector<Property> out;
  for (const auto& [ch, vals] : golden.by_channel()) {
    Property p;
    p.kind = Property::Kind::Golden;
    p.id = "golden_" + ch;
    p.channel = ch;
    p.expected = vals;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rsm
