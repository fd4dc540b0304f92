#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <tuple>

#include "rsmkit/sim.hpp"

namespace rsm {
namespace {

struct PendingRecord {
  std::string channel;
  std::int64_t seq;
  Value value;
  Cycle cycle;
  std::int64_t order;  // insertion index, for a stable global sort
};

struct TimedChan {
  std::deque<std::pair<Value, Cycle>> items;  // value, ready time
  std::optional<Value> capacity;
  std::int64_t max_occupancy = 0;
  // at most one reader and one writer can wait (single endpoint per side)
  int waiting_reader = -1;  // entity index
  int waiting_writer = -1;
};

struct SwTask {
  int module = -1;
  enum class State { Ready, Blocked, Done } state = State::Ready;
  Cycle ready_time = 0;
};

class TimedSim {
 public:
  TimedSim(const CompiledModel& cm, const Stimulus& stim, int level,
           const std::vector<DeadlineSpec>& deadlines, const SimLimits& limits)
      : cm_(cm), stim_(stim), level_(level), deadlines_(deadlines), limits_(limits) {}

  std::pair<Trace, StatsReport> run();

 private:
  struct Entity {
    bool is_cpu = false;
    int module = -1;  // HW/FPGA entities
    Cycle local = 0;
    bool parked = false;
    bool done = false;
    std::int64_t latest_push = -1;  // queue entries with older seq are stale
    Cycle queued_at = 0;
  };

  using QKey = std::tuple<Cycle, int, std::int64_t>;  // time, tie (module idx), push seq

  void push_entity(int e, Cycle at, int tie) {
    std::int64_t seq = push_seq_++;
    entities_[static_cast<size_t>(e)].latest_push = seq;
    entities_[static_cast<size_t>(e)].queued_at = at;
    queue_.push({QKey{at, tie, seq}, e});
  }

  int entity_tie(int e) const {
    const Entity& ent = entities_[static_cast<size_t>(e)];
    if (!ent.is_cpu) return ent.module;
    // the CPU competes with the declaration index of the task it will run next
    for (size_t k = 0; k < sw_tasks_.size(); ++k) {
      const SwTask& t = sw_tasks_[(cur_sw_ + k) % sw_tasks_.size()];
      if (t.state == SwTask::State::Ready) return t.module;
    }
    return static_cast<int>(cm_.model.modules.size());
  }

  Placement class_of(int module) const {
    return cm_.model.placements.at(cm_.model.modules[static_cast<size_t>(module)].name);
  }

  void note_time(Cycle t) { max_time_ = std::max(max_time_, t); }

  void guard(Cycle t) {
    if (t > limits_.max_cycles) throw LivelockGuardError(limits_.max_cycles);
  }

  // Bus transaction; returns its end cycle.
  Cycle bus_transfer(Transaction::Kind kind, int module, std::int64_t words, Cycle request,
                     const std::string& channel, const std::string& context) {
    Value cpw = cm_.model.bus ? cm_.model.bus->cycles_per_word : 1;
    Cycle start = std::max(bus_free_, request);
    Cycle end = start + words * cpw;
    bus_free_ = end;
    Transaction t;
    t.kind = kind;
    t.initiator = cm_.model.modules[static_cast<size_t>(module)].name;
    t.words = words;
    t.start_cycle = start;
    t.end_cycle = end;
    t.channel = channel;
    t.context = context;
    stats_.transactions.push_back(t);
    stats_.bus_busy_cycles += end - start;
    busy_[static_cast<size_t>(module)] += end - start;
    note_time(end);
    return end;
  }

  void commit_item(int ch, Value v, Cycle ready, int writer_module) {
    TimedChan& c = chans_[static_cast<size_t>(ch)];
    c.items.push_back({v, ready});
    c.max_occupancy = std::max(c.max_occupancy, static_cast<std::int64_t>(c.items.size()));
    const std::string& name = cm_.model.channels[static_cast<size_t>(ch)].name;
    records_.push_back({name, chan_seq_[name]++, v, ready, order_++});
    note_time(ready);
    (void)writer_module;
    if (c.waiting_reader >= 0) {
      int e = c.waiting_reader;
      c.waiting_reader = -1;
      wake_entity(e, ready, ch, /*for_read=*/true);
    }
  }

  void consume_item(int ch, Cycle at) {
    TimedChan& c = chans_[static_cast<size_t>(ch)];
    c.items.pop_front();
    if (c.waiting_writer >= 0) {
      int e = c.waiting_writer;
      c.waiting_writer = -1;
      wake_entity(e, at, ch, /*for_read=*/false);
    }
  }

  void wake_entity(int e, Cycle at, int ch, bool for_read) {
    (void)ch;
    (void)for_read;
    Entity& ent = entities_[static_cast<size_t>(e)];
    if (ent.is_cpu) {
      // find the blocked task waiting on this channel; mark it ready
      for (auto& t : sw_tasks_) {
        if (t.state == SwTask::State::Blocked && blocked_on_[static_cast<size_t>(t.module)] == ch &&
            blocked_read_[static_cast<size_t>(t.module)] == for_read) {
          t.state = SwTask::State::Ready;
          t.ready_time = std::max(t.ready_time, at);
        }
      }
      if (ent.parked) {
        ent.parked = false;
        push_entity(e, std::max(ent.local, at), entity_tie(e));
      } else {
        // queued for a future ready time; pull the run forward if this wake
        // is earlier
        Cycle when = std::max(ent.local, at);
        if (when < ent.queued_at) push_entity(e, when, entity_tie(e));
      }
    } else {
      ent.parked = false;
      ent.local = std::max(ent.local, at);
      push_entity(e, ent.local, ent.module);
    }
  }

  // Execute one statement of module `mi` whose clock is `now`.
  // Returns the new clock, or nullopt if the module blocked on a channel.
  struct StepOutcome {
    bool blocked = false;
    bool blocked_read = true;
    int channel = -1;
    Cycle time = 0;
  };

  StepOutcome step_module(int mi, Cycle now, int entity_idx);

  const CompiledModel& cm_;
  const Stimulus& stim_;
  int level_;
  const std::vector<DeadlineSpec>& deadlines_;
  SimLimits limits_;

  std::vector<ModuleMachine> machines_;
  std::vector<Entity> entities_;
  std::vector<SwTask> sw_tasks_;
  size_t cur_sw_ = 0;
  int cpu_entity_ = -1;

  std::vector<TimedChan> chans_;
  std::map<std::string, std::int64_t> chan_seq_;
  std::map<std::string, size_t> env_cursor_;
  std::vector<Cycle> busy_;
  std::vector<int> blocked_on_;     // per module: channel index it waits on
  std::vector<bool> blocked_read_;  // per module: waiting to read (vs write)

  std::priority_queue<std::pair<QKey, int>, std::vector<std::pair<QKey, int>>,
                      std::greater<>> queue_;
  std::int64_t push_seq_ = 0;

  Cycle bus_free_ = 0;
  std::string loaded_context_;  // empty = none
  Cycle max_time_ = 0;
  std::int64_t order_ = 0;
  std::vector<PendingRecord> records_;
  StatsReport stats_;
};

TimedSim::StepOutcome TimedSim::step_module(int mi, Cycle now, int entity_idx) {
  ModuleMachine& mm = machines_[static_cast<size_t>(mi)];
  const ModuleDef& mod = cm_.model.modules[static_cast<size_t>(mi)];
  const Stmt* s = mm.peek();
  assert(s != nullptr);
  StepOutcome out;
  out.time = now;
  switch (s->kind) {
    case Stmt::Kind::Read: {
      int ch = cm_.in_port_channel[static_cast<size_t>(mi)].at(s->port);
      if (ch >= 0) {
        TimedChan& c = chans_[static_cast<size_t>(ch)];
        if (c.items.empty()) {
          out.blocked = true;
          out.blocked_read = true;
          out.channel = ch;
          c.waiting_reader = entity_idx;
          return out;
        }
        auto [v, ready] = c.items.front();
        Cycle t = std::max(now, ready);
        consume_item(ch, t);
        mm.set_var(s->var_slot, v);
        mm.advance();
        out.time = t;
      } else {
        std::string key = mod.name + "." + s->port;
        size_t& cur = env_cursor_[key];
        auto it = stim_.inputs.find(key);
        size_t avail = it == stim_.inputs.end() ? 0 : it->second.size();
        if (cur >= avail) {
          out.blocked = true;
          out.blocked_read = true;
          out.channel = -1;  // never woken: stimulus exhausted
          return out;
        }
        mm.set_var(s->var_slot, it->second[cur++]);
        mm.advance();
      }
      break;
    }
    case Stmt::Kind::Write: {
      int ch = cm_.out_port_channel[static_cast<size_t>(mi)].at(s->port);
      if (ch >= 0) {
        TimedChan& c = chans_[static_cast<size_t>(ch)];
        if (c.capacity && static_cast<std::int64_t>(c.items.size()) >= *c.capacity) {
          out.blocked = true;
          out.blocked_read = false;
          out.channel = ch;
          c.waiting_writer = entity_idx;
          return out;
        }
        Value v = mm.eval(*s->value, nullptr, mod.name);
        const ChannelDef& cd = cm_.model.channels[static_cast<size_t>(ch)];
        int dst_mi = cm_.module_index.at(cd.dst.module);
        bool cross = class_of(mi) != class_of(dst_mi);
        Cycle commit = now;
        if (cross) commit = bus_transfer(Transaction::Kind::Data, mi, 1, now, cd.name, "");
        commit_item(ch, v, commit, mi);
        mm.advance();
        out.time = commit;
      } else {
        Value v = mm.eval(*s->value, nullptr, mod.name);
        std::string name = mod.name + "." + s->port;
        records_.push_back({name, chan_seq_[name]++, v, now, order_++});
        note_time(now);
        mm.advance();
      }
      break;
    }
    case Stmt::Kind::Assign: {
      Value v = mm.eval(*s->value, nullptr, mod.name);
      mm.set_var(s->var_slot, v);
      mm.advance();
      break;
    }
    case Stmt::Kind::Compute: {
      if (!s->cycles) throw UnannotatedCompute(mod.name, s->label);
      Cycle t = now + *s->cycles;
      busy_[static_cast<size_t>(mi)] += *s->cycles;
      mm.advance();
      out.time = t;
      break;
    }
    case Stmt::Kind::Reconfigure: {
      if (level_ >= 3) {
        if (loaded_context_ != s->context) {
          const ContextDef* ctx = cm_.model.find_context(s->context);
          assert(ctx != nullptr);
          Cycle end = bus_transfer(Transaction::Kind::Bitstream, mi, ctx->bitstream_words, now,
                                   "", s->context);
          loaded_context_ = s->context;
          ++stats_.reconfig_count;
          stats_.bitstream_words_total += ctx->bitstream_words;
          out.time = end;
        }
      }
      mm.advance();
      break;
    }
    case Stmt::Kind::CallFpga: {
      auto args = mm.eval_args(*s, nullptr, mod.name);
      if (level_ >= 3) {
        const ContextDef* ctx =
            loaded_context_.empty() ? nullptr : cm_.model.find_context(loaded_context_);
        if (!ctx || !ctx->find_fn(s->callee))
          throw ReconfigViolation(s->callee, loaded_context_, now, mod.name, s->pos);
      }
      Value latency = cm_.model.fn_latency(s->callee).value_or(0);
      const ElaboratedKernel* k = cm_.kernel(s->callee);
      Value v = eval_kernel(*k, args, mod.name, s->pos);
      mm.set_var(s->var_slot, v);
      busy_[static_cast<size_t>(mi)] += latency;
      mm.advance();
      out.time = now + latency;
      break;
    }
    case Stmt::Kind::If:
      mm.exec_if(nullptr, mod.name);
      break;
    case Stmt::Kind::Repeat:
      mm.exec_repeat();
      break;
    case Stmt::Kind::Call:
    case Stmt::Kind::Return:
      mm.advance();
      break;
  }
  return out;
}

std::pair<Trace, StatsReport> TimedSim::run() {
  const size_t n = cm_.model.modules.size();
  machines_.reserve(n);
  for (const auto& p : cm_.programs) machines_.emplace_back(&p);
  chans_.resize(cm_.model.channels.size());
  for (size_t i = 0; i < chans_.size(); ++i) chans_[i].capacity = cm_.model.channels[i].capacity;
  busy_.assign(n, 0);
  blocked_on_.assign(n, -2);
  blocked_read_.assign(n, true);
  if (cm_.model.initial_context) loaded_context_ = *cm_.model.initial_context;

  // Entities: one per HW/FPGA module, one CPU for all SW modules.
  std::vector<int> module_entity(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const std::string& name = cm_.model.modules[i].name;
    auto it = cm_.model.placements.find(name);
    if (it == cm_.model.placements.end())
      throw std::invalid_argument("module '" + name + "' has no placement");
    if (it->second == Placement::SW) continue;
    Entity e;
    e.module = static_cast<int>(i);
    module_entity[i] = static_cast<int>(entities_.size());
    entities_.push_back(e);
  }
  for (size_t i = 0; i < n; ++i) {
    if (cm_.model.placements.at(cm_.model.modules[i].name) != Placement::SW) continue;
    if (cpu_entity_ < 0) {
      Entity e;
      e.is_cpu = true;
      cpu_entity_ = static_cast<int>(entities_.size());
      entities_.push_back(e);
    }
    SwTask t;
    t.module = static_cast<int>(i);
    if (machines_[i].done()) t.state = SwTask::State::Done;
    sw_tasks_.push_back(t);
    module_entity[i] = cpu_entity_;
  }

  for (size_t e = 0; e < entities_.size(); ++e) {
    Entity& ent = entities_[e];
    if (!ent.is_cpu && machines_[static_cast<size_t>(ent.module)].done()) ent.done = true;
    if (!ent.done) push_entity(static_cast<int>(e), 0, entity_tie(static_cast<int>(e)));
  }

  while (!queue_.empty()) {
    auto [key, ei] = queue_.top();
    queue_.pop();
    Entity& ent = entities_[static_cast<size_t>(ei)];
    if (std::get<2>(key) != ent.latest_push) continue;  // stale entry
    if (ent.done) continue;
    Cycle t = std::get<0>(key);
    ent.local = std::max(ent.local, t);
    guard(ent.local);

    if (!ent.is_cpu) {
      int mi = ent.module;
      if (machines_[static_cast<size_t>(mi)].done()) {
        ent.done = true;
        continue;
      }
      StepOutcome o = step_module(mi, ent.local, ei);
      if (o.blocked) {
        ent.parked = true;  // woken by a commit/consume, or stuck on the environment
        blocked_on_[static_cast<size_t>(mi)] = o.channel;
        blocked_read_[static_cast<size_t>(mi)] = o.blocked_read;
      } else {
        ent.local = std::max(ent.local, o.time);
        note_time(ent.local);
        if (machines_[static_cast<size_t>(mi)].done())
          ent.done = true;
        else
          push_entity(ei, ent.local, mi);
      }
      continue;
    }

    // --- CPU: pick the next ready software task in cyclic order ---
    int chosen = -1;
    Cycle future = -1;
    for (size_t k = 0; k < sw_tasks_.size(); ++k) {
      size_t idx = (cur_sw_ + k) % sw_tasks_.size();
      SwTask& task = sw_tasks_[idx];
      if (task.state != SwTask::State::Ready) continue;
      if (task.ready_time <= ent.local) {
        chosen = static_cast<int>(idx);
        break;
      }
      if (future < 0 || task.ready_time < future) future = task.ready_time;
    }
    if (chosen < 0) {
      bool all_done = true;
      for (const auto& task : sw_tasks_)
        if (task.state != SwTask::State::Done) all_done = false;
      if (all_done) {
        ent.done = true;
      } else if (future >= 0) {
        push_entity(ei, future, entity_tie(ei));
      } else {
        ent.parked = true;  // every task blocked; commits will wake us
      }
      continue;
    }

    cur_sw_ = static_cast<size_t>(chosen);
    SwTask& task = sw_tasks_[static_cast<size_t>(chosen)];
    int mi = task.module;
    StepOutcome o = step_module(mi, ent.local, ei);
    if (o.blocked) {
      task.state = SwTask::State::Blocked;
      task.ready_time = ent.local;
      blocked_on_[static_cast<size_t>(mi)] = o.channel;
      blocked_read_[static_cast<size_t>(mi)] = o.blocked_read;
      cur_sw_ = (cur_sw_ + 1) % sw_tasks_.size();
    } else {
      ent.local = std::max(ent.local, o.time);
      note_time(ent.local);
      if (machines_[static_cast<size_t>(mi)].done()) {
        task.state = SwTask::State::Done;
        cur_sw_ = (cur_sw_ + 1) % sw_tasks_.size();
      } else if (machines_[static_cast<size_t>(mi)].take_outer_iteration_flag()) {
        cur_sw_ = (cur_sw_ + 1) % sw_tasks_.size();  // cyclostatic yield point
      }
    }
    bool any_left = false;
    for (const auto& tk : sw_tasks_)
      if (tk.state != SwTask::State::Done) any_left = true;
    if (any_left)
      push_entity(ei, ent.local, entity_tie(ei));
    else
      ent.done = true;
  }

  // Termination: anything not done is deadlocked (or starved of stimulus).
  Trace trace;
  bool all_done = true;
  for (const auto& e : entities_)
    if (!e.done) all_done = false;
  for (const auto& task : sw_tasks_)
    if (task.state != SwTask::State::Done) all_done = false;
  trace.deadlocked = !all_done;

  std::stable_sort(records_.begin(), records_.end(),
                   [](const PendingRecord& a, const PendingRecord& b) {
                     if (a.cycle != b.cycle) return a.cycle < b.cycle;
                     return a.order < b.order;
                   });
  for (const auto& r : records_) {
    trace.records.push_back({r.channel, r.seq, r.value});
    trace.commit_cycles.push_back(r.cycle);
  }

  stats_.total_cycles = max_time_;
  stats_.bus_utilization =
      stats_.total_cycles > 0
          ? static_cast<double>(stats_.bus_busy_cycles) / static_cast<double>(stats_.total_cycles)
          : 0.0;
  for (size_t i = 0; i < cm_.model.channels.size(); ++i)
    stats_.max_occupancy[cm_.model.channels[i].name] = chans_[i].max_occupancy;
  for (size_t i = 0; i < cm_.model.modules.size(); ++i)
    stats_.busy_cycles[cm_.model.modules[i].name] = busy_[i];

  auto cyc = trace.cycles_by_channel();
  for (const auto& d : deadlines_) {
    DeadlineResult r;
    r.property_id = d.id;
    r.bound = d.max_cycles;
    const auto its = cyc.find(d.src_channel);
    const auto itd = cyc.find(d.dst_channel);
    Cycle observed = 0;
    if (its != cyc.end() && itd != cyc.end()) {
      size_t m = std::min(its->second.size(), itd->second.size());
      for (size_t j = 0; j < m; ++j)
        observed = std::max(observed, itd->second[j] - its->second[j]);
    }
    r.observed = observed;
    r.pass = observed <= d.max_cycles;
    stats_.deadline_results.push_back(r);
  }

  return {std::move(trace), std::move(stats_)};
}

}  // namespace

std::pair<Trace, StatsReport> simulate_timed(const CompiledModel& cm, const Stimulus& stim,
                                             int level,
                                             const std::vector<DeadlineSpec>& deadlines,
                                             const SimLimits& limits) {
  TimedSim sim(cm, stim, level, deadlines, limits);
  return sim.run();
}

}  // namespace rsm
