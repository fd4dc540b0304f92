#include "rsmkit/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rsm {

void write_trace_file(const Trace& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  if (t.deadlocked) out << "# deadlocked\n";
  for (const auto& r : t.records)
    out << r.channel << " " << r.seq << " " << r.value << "\n";
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  Trace t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("deadlocked") != std::string::npos) t.deadlocked = true;
      continue;
    }
    std::istringstream ss(line);
    TraceRecord r;
    long long v = 0;
    if (!(ss >> r.channel >> r.seq >> v)) throw IoError("malformed trace line: " + line);
    r.value = static_cast<Value>(v);
    t.records.push_back(std::move(r));
  }
  return t;
}

void write_stimulus_file(const Stimulus& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "seed " << s.seed << "\n";
  for (const auto& [port, vals] : s.inputs) {
    out << "input " << port;
    for (Value v : vals) out << " " << v;
    out << "\n";
  }
}

Stimulus read_stimulus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  Stimulus s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "seed") {
      if (!(ss >> s.seed))
        throw IoError(path + ":" + std::to_string(lineno) + ": malformed seed line");
    } else if (kw == "input") {
      std::string port;
      if (!(ss >> port))
        throw IoError(path + ":" + std::to_string(lineno) + ": missing port name");
      long long v;
      while (ss >> v) s.inputs[port].push_back(static_cast<Value>(v));
      if (!ss.eof())
        throw IoError(path + ":" + std::to_string(lineno) + ": malformed value list");
    } else {
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 'seed' or 'input'");
    }
  }
  return s;
}

namespace {

nlohmann::json stats_to_json(const StatsReport& s) {
  nlohmann::json j;
  j["total_cycles"] = s.total_cycles;
  j["bus_busy_cycles"] = s.bus_busy_cycles;
  j["bus_utilization"] = s.bus_utilization;
  j["reconfig_count"] = s.reconfig_count;
  j["bitstream_words_total"] = s.bitstream_words_total;
  j["max_occupancy"] = s.max_occupancy;
  j["busy_cycles"] = s.busy_cycles;
  nlohmann::json dl = nlohmann::json::array();
  for (const auto& d : s.deadline_results) {
    dl.push_back({{"property_id", d.property_id},
                  {"observed", d.observed},
                  {"bound", d.bound},
                  {"pass", d.pass}});
  }
  j["deadline_results"] = dl;
  nlohmann::json tx = nlohmann::json::array();
  for (const auto& t : s.transactions) {
    nlohmann::json e;
    e["kind"] = t.kind == Transaction::Kind::Data ? "DATA" : "BITSTREAM";
    e["initiator"] = t.initiator;
    e["words"] = t.words;
    e["start_cycle"] = t.start_cycle;
    e["end_cycle"] = t.end_cycle;
    if (!t.channel.empty()) e["channel"] = t.channel;
    if (!t.context.empty()) e["context"] = t.context;
    tx.push_back(e);
  }
  j["transactions"] = tx;
  return j;
}

}  // namespace

std::string stats_to_json_string(const StatsReport& s) {
  return stats_to_json(s).dump(2) + "\n";
}

std::string stats_to_text(const StatsReport& s) {
  std::ostringstream os;
  os << "total_cycles:          " << s.total_cycles << "\n";
  os << "bus_busy_cycles:       " << s.bus_busy_cycles << "\n";
  os << "bus_utilization:       " << s.bus_utilization << "\n";
  os << "reconfig_count:        " << s.reconfig_count << "\n";
  os << "bitstream_words_total: " << s.bitstream_words_total << "\n";
  os << "max_occupancy:\n";
  for (const auto& [ch, v] : s.max_occupancy) os << "  " << ch << ": " << v << "\n";
  os << "busy_cycles:\n";
  for (const auto& [mod, v] : s.busy_cycles) os << "  " << mod << ": " << v << "\n";
  if (!s.deadline_results.empty()) {
    os << "deadline_results:\n";
    for (const auto& d : s.deadline_results)
      os << "  " << d.property_id << ": observed " << d.observed << " bound " << d.bound
         << " " << (d.pass ? "PASS" : "FAIL") << "\n";
  }
  return os.str();
}

}  // namespace rsm
