#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rsmkit/model.hpp"

namespace rsmtest {

// Independent oracle for the consistency checker: exhaustive enumeration of
// syntactic paths with every repeat unrolled to exactly its literal count.
// Both if-arms are explored (data is abstracted away). Returns true iff some
// path executes a callfpga under a context (or no context) lacking the
// function.
class PathEnumerator {
 public:
  PathEnumerator(const std::vector<rsm::ContextDef>& ctxs,
                 const std::optional<std::string>& initial)
      : ctxs_(ctxs) {
    init_ = -1;
    if (initial) {
      for (size_t i = 0; i < ctxs.size(); ++i)
        if (ctxs[i].name == *initial) init_ = static_cast<int>(i);
    }
  }

  bool has_violation(const rsm::Block& body) {
    violation_ = false;
    walk(body, 0, init_, [](int) {});
    return violation_;
  }

 private:
  bool ctx_has(int ctx, const std::string& fn) const {
    if (ctx < 0) return false;
    return ctxs_[static_cast<size_t>(ctx)].find_fn(fn) != nullptr;
  }

  int ctx_index(const std::string& name) const {
    for (size_t i = 0; i < ctxs_.size(); ++i)
      if (ctxs_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  void walk(const rsm::Block& b, size_t i, int ctx, const std::function<void(int)>& k) {
    if (violation_) return;  // one witness is enough
    if (i == b.size()) {
      k(ctx);
      return;
    }
    const rsm::Stmt& s = *b[i];
    auto next = [&](int c) { walk(b, i + 1, c, k); };
    switch (s.kind) {
      case rsm::Stmt::Kind::Reconfigure:
        next(ctx_index(s.context));
        break;
      case rsm::Stmt::Kind::CallFpga:
        if (!ctx_has(ctx, s.callee)) {
          violation_ = true;
          return;
        }
        next(ctx);
        break;
      case rsm::Stmt::Kind::If:
        walk(s.body, 0, ctx, next);
        walk(s.else_body, 0, ctx, next);
        break;
      case rsm::Stmt::Kind::Repeat: {
        std::function<void(int, rsm::Value)> iter = [&](int c, rsm::Value left) {
          if (violation_) return;
          if (left == 0) {
            next(c);
            return;
          }
          walk(s.body, 0, c, [&](int c2) { iter(c2, left - 1); });
        };
        iter(ctx, s.count);
        break;
      }
      default:
        next(ctx);
        break;
    }
  }

  const std::vector<rsm::ContextDef>& ctxs_;
  int init_ = -1;
  bool violation_ = false;
};

}  // namespace rsmtest
