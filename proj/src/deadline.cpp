#include "rsmkit/deadline.hpp"

#include <stdexcept>

namespace rsm {
namespace {

struct Coster {
  const CompiledModel& cm;
  size_t module_idx;

  Cycle stmt_cost(const Stmt& s) const {
    switch (s.kind) {
      case Stmt::Kind::Compute:
        if (!s.cycles)
          throw UnannotatedCompute(cm.model.modules[module_idx].name, s.label);
        return *s.cycles;
      case Stmt::Kind::Read:
      case Stmt::Kind::Write: {
        const auto& ports = s.kind == Stmt::Kind::Read ? cm.in_port_channel[module_idx]
                                                       : cm.out_port_channel[module_idx];
        auto it = ports.find(s.port);
        if (it == ports.end() || it->second < 0) return 0;  // environment port
        const ChannelDef& ch = cm.model.channels[static_cast<size_t>(it->second)];
        const std::string& self = cm.model.modules[module_idx].name;
        const std::string& peer = s.kind == Stmt::Kind::Read ? ch.src.module : ch.dst.module;
        auto p1 = cm.model.placement_of(self);
        auto p2 = cm.model.placement_of(peer);
        if (!p1 || !p2 || *p1 == *p2) return 0;
        Value cpw = cm.model.bus ? cm.model.bus->cycles_per_word : 1;
        return cpw;  // one word per channel operation
      }
      case Stmt::Kind::Reconfigure: {
        const ContextDef* ctx = cm.model.find_context(s.context);
        if (!ctx) return 0;
        Value cpw = cm.model.bus ? cm.model.bus->cycles_per_word : 1;
        return static_cast<Cycle>(ctx->bitstream_words) * cpw;
      }
      case Stmt::Kind::CallFpga:
        return cm.model.fn_latency(s.callee).value_or(0);
      default:
        return 0;
    }
  }

  // longest path through a block: sequence adds, branches take the worse
  // arm, literal loops multiply
  Cycle wcet(const Block& b) const {
    Cycle total = 0;
    for (const auto& s : b) {
      total += stmt_cost(*s);
      if (s->kind == Stmt::Kind::If) {
        total += std::max(wcet(s->body), wcet(s->else_body));
      } else if (s->kind == Stmt::Kind::Repeat) {
        total += static_cast<Cycle>(s->count) * wcet(s->body);
      }
    }
    return total;
  }
};

// Find the block that contains both labels at its own level and return the
// inclusive slice between them.
const Block* find_region(const Block& b, const std::string& src, const std::string& sink,
                         size_t& lo, size_t& hi) {
  auto label_at = [&](size_t i, const std::string& l) {
    return b[i]->kind == Stmt::Kind::Compute && b[i]->label == l;
  };
  size_t s = b.size(), e = b.size();
  for (size_t i = 0; i < b.size(); ++i) {
    if (label_at(i, src) && s == b.size()) s = i;
    if (label_at(i, sink)) e = i;
  }
  if (s < b.size() && e < b.size() && s <= e) {
    lo = s;
    hi = e;
    return &b;
  }
  for (const auto& st : b) {
    if (const Block* r = find_region(st->body, src, sink, lo, hi)) return r;
    if (const Block* r = find_region(st->else_body, src, sink, lo, hi)) return r;
  }
  return nullptr;
}

}  // namespace

DeadlineOutcome deadline_check(const CompiledModel& cm, const std::string& module, Cycle bound,
                               const std::optional<std::string>& src_label,
                               const std::optional<std::string>& sink_label) {
  auto it = cm.module_index.find(module);
  if (it == cm.module_index.end()) throw std::invalid_argument("unknown module: " + module);
  size_t mi = static_cast<size_t>(it->second);
  Coster coster{cm, mi};
  const Block& body = cm.programs[mi].body;
  Cycle w;
  if (src_label || sink_label) {
    if (!src_label || !sink_label)
      throw std::invalid_argument("source and sink labels must be given together");
    size_t lo = 0, hi = 0;
    const Block* region = find_region(body, *src_label, *sink_label, lo, hi);
    if (!region)
      throw std::invalid_argument("labels '" + *src_label + "'..'" + *sink_label +
                                  "' do not bound a region in module " + module);
    Block slice;
    for (size_t i = lo; i <= hi; ++i) slice.push_back((*region)[i]->clone());
    w = coster.wcet(slice);
  } else {
    w = coster.wcet(body);
  }
  return {w, w <= bound};
}

}  // namespace rsm
