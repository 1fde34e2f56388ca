/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blockdsa/catalog.hpp"
#include "blockdsa/ds.hpp"
#include "blockdsa/project.hpp"
#include "blockdsa/registry.hpp"
#include "blockdsa/value.hpp"
#include "json.hpp"

namespace blockdsa {

inline constexpr std::uint64_t kDefaultStepBudget = 100000;

enum class EventKind { Say, SayForSecs, AskPrompt, RuntimeError, Halt };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Say: return "SAY";
    case EventKind::SayForSecs: return "SAY_FOR_SECS";
    case EventKind::AskPrompt: return "ASK_PROMPT";
    case EventKind::RuntimeError: return "RUNTIME_ERROR";
    case EventKind::Halt: return "HALT";
  }
  return "SAY";
}

struct Event {
  EventKind kind;
  std::string text;
  std::optional<double> duration;  // SAY_FOR_SECS only
  std::uint64_t step_index = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

enum class Termination { Completed, BudgetExceeded, InputExhausted };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "COMPLETED";
    case Termination::BudgetExceeded: return "BUDGET_EXCEEDED";
    case Termination::InputExhausted: return "INPUT_EXHAUSTED";
  }
  return "COMPLETED";
}

struct SessionResult {
  Termination status = Termination::Completed;
  std::uint64_t steps_used = 0;
  std::vector<Event> transcript;
  std::vector<std::pair<std::string, Value>> variables;  // declaration order
  std::vector<ObjectSnapshot> registry;                   // creation order
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint64_t step_budget = kDefaultStepBudget;
};

namespace msg {
inline constexpr std::string_view kDivisionByZero = "Division by zero";
inline constexpr std::string_view kNoCurrentElement = "current element only works inside a for each element in block";
inline constexpr std::string_view kInvalidStructure = "Invalid data structure";
inline constexpr std::string_view kBudgetExceeded = "step budget exceeded";
inline constexpr std::string_view kInputExhausted = "no more input for ask";
}  // namespace msg

namespace detail {

enum class Op {
  CreateNewArray, AddToArray, ItemOfArray, LengthOfArray, SortAscending, SortDescending, SearchInArray,
  CreateNewSet, AddToSet, IsSetEmpty, CheckContainInSet, UnionOfSets, IntersectionOfSets, DifferenceOfSets,
  SizeOfSet, CreateNewDictionary, AddKeyValue, GetValueForKey, ContainsKey, RemoveKey, SizeOfDictionary,
  ForEachElementIn, CurrentElement, WhenStarted, Ask, Answer, Say, SayForSecs, SetVariable, ChangeVariable,
  Repeat, RepeatUntil, Forever, IfThen, IfElse, Equals, LessThan, GreaterThan, And, Or, Not, Join,
  StringContains, Add, Subtract, Multiply, Divide, Unknown,
};

inline Op op_of(std::string_view opcode) {
  static const std::unordered_map<std::string_view, Op> table = {
      {"createNewArray", Op::CreateNewArray}, {"addToArray", Op::AddToArray},
      {"itemOfArray", Op::ItemOfArray}, {"lengthOfArray", Op::LengthOfArray},
      {"sortArrayAscending", Op::SortAscending}, {"sortArrayDescending", Op::SortDescending},
      {"searchInArray", Op::SearchInArray}, {"createNewSet", Op::CreateNewSet}, {"addToSet", Op::AddToSet},
      {"isSetEmpty", Op::IsSetEmpty}, {"checkContainInSet", Op::CheckContainInSet},
      {"unionOfSets", Op::UnionOfSets}, {"intersectionOfSets", Op::IntersectionOfSets},
      {"differenceOfSets", Op::DifferenceOfSets}, {"sizeOfSet", Op::SizeOfSet},
      {"createNewDictionary", Op::CreateNewDictionary}, {"addKeyValueToDictionary", Op::AddKeyValue},
      {"getValueForKey", Op::GetValueForKey}, {"containsKeyInDictionary", Op::ContainsKey},
      {"removeKeyFromDictionary", Op::RemoveKey}, {"sizeOfDictionary", Op::SizeOfDictionary},
      {"forEachElementIn", Op::ForEachElementIn}, {"currentElement", Op::CurrentElement},
      {"whenStarted", Op::WhenStarted}, {"ask", Op::Ask}, {"answer", Op::Answer}, {"say", Op::Say},
      {"sayForSecs", Op::SayForSecs}, {"setVariable", Op::SetVariable}, {"changeVariable", Op::ChangeVariable},
      {"repeat", Op::Repeat}, {"repeatUntil", Op::RepeatUntil}, {"forever", Op::Forever}, {"ifThen", Op::IfThen},
      {"ifElse", Op::IfElse}, {"equals", Op::Equals}, {"lessThan", Op::LessThan},
      {"greaterThan", Op::GreaterThan}, {"andOp", Op::And}, {"orOp", Op::Or}, {"notOp", Op::Not},
      {"joinText", Op::Join}, {"stringContains", Op::StringContains}, {"add", Op::Add},
      {"subtract", Op::Subtract}, {"multiply", Op::Multiply}, {"divide", Op::Divide},
  };
  auto it = table.find(opcode);
  return it == table.end() ? Op::Unknown : it->second;
}

// Thrown by tick() when the budget is spent; unwinds to resume().
struct BudgetSpent {};

}  // namespace detail

/// Executes one project deterministically.
///
/// Scripts run one after another in file order, each to completion. The only
/// suspension point is `ask`: resume() returns State::WaitingForInput right
/// after the prompt event, and the next resume() continues after the ask
/// once provide_answer() has been called.
///
/// Every block execution costs one step: a command or C block when it runs
/// (after its inputs are evaluated), each reporter evaluation, and each loop
/// iteration check including the check that ends the loop.
class Interpreter {
 public:
  enum class State { Running, WaitingForInput, Finished };

  Interpreter(std::shared_ptr<const Project> project, RunOptions opts)
      : project_(std::move(project)), budget_(opts.step_budget), registry_(opts.seed) {
    for (const auto& name : project_->variables) {
      var_index_.emplace(name, variables_.size());
      variables_.emplace_back(name, Value("0"));
    }
  }

  Interpreter(const Project& project, RunOptions opts)
      : Interpreter(std::make_shared<const Project>(project), opts) {}

  State state() const { return state_; }
  Termination status() const { return status_; }
  std::uint64_t steps_used() const { return steps_used_; }
  const std::vector<Event>& transcript() const { return transcript_; }
  const std::vector<std::pair<std::string, Value>>& variables() const { return variables_; }
  const Registry& registry() const { return registry_; }

  /// Runs until the program finishes, the budget runs out, or an ask needs an
  /// answer.
  State resume() {
    if (state_ != State::Running) return state_;
    try {
      for (;;) {
        if (frames_.empty()) {
          if (next_script_ >= project_->scripts.size()) {
            finish(Termination::Completed);
            return state_;
          }
          push_body(&project_->scripts[next_script_++], FrameKind::Plain);
          frames_.back().pc = 0;
          continue;
        }
        Frame& f = frames_.back();
        if (f.pc < f.body->blocks.size()) {
          const BlockInstance& b = f.body->blocks[f.pc++];
          exec_stack_block(b);  // may push frames; `f` is stale afterwards
          if (state_ != State::Running) return state_;
          continue;
        }
        if (f.kind == FrameKind::Plain) {
          frames_.pop_back();
        } else {
          iteration_check();
        }
      }
    } catch (const detail::BudgetSpent&) {
      finish(Termination::BudgetExceeded);
    }
    return state_;
  }

  /// Delivers the answer for the pending ask. Ignored unless waiting.
  void provide_answer(std::string text) {
    if (state_ != State::WaitingForInput) return;
    answer_ = Value(std::move(text));
    state_ = State::Running;
  }

  /// Ends a run that is waiting for input nobody will give.
  void abandon_input() {
    if (state_ == State::WaitingForInput) finish(Termination::InputExhausted);
  }

  SessionResult result() const {
    return SessionResult{status_, steps_used_, transcript_, variables_, registry_.snapshot()};
  }

 private:
  enum class FrameKind { Plain, Repeat, RepeatUntil, Forever, ForEach };

  struct Frame {
    const Script* body = nullptr;
    std::size_t pc = 0;
    FrameKind kind = FrameKind::Plain;
    const BlockInstance* owner = nullptr;
    std::uint64_t remaining = 0;  // repeat
    // for-each loop: detached snapshot and cursor
    std::vector<Value> elements;
    std::size_t next = 0;
    std::optional<Value> current;
  };

  static const Script& empty_script() {
    static const Script s;
    return s;
  }

  // Loop frames start with pc at the end so the first thing they do is an
  // iteration check.
  Frame& push_body(const Script* body, FrameKind kind, const BlockInstance* owner = nullptr) {
    Frame f;
    f.body = body ? body : &empty_script();
    f.kind = kind;
    f.owner = owner;
    f.pc = kind == FrameKind::Plain ? 0 : f.body->blocks.size();
    frames_.push_back(std::move(f));
    return frames_.back();
  }

  void tick() {
    if (steps_used_ >= budget_) throw detail::BudgetSpent{};
    ++steps_used_;
  }

  void emit(EventKind kind, std::string text, std::optional<double> duration = std::nullopt) {
    transcript_.push_back(Event{kind, std::move(text), duration, steps_used_});
  }

  Value runtime_error(std::string_view message) {
    emit(EventKind::RuntimeError, std::string(message));
    return Value(message);
  }

  void finish(Termination t) {
    status_ = t;
    state_ = State::Finished;
    frames_.clear();
    if (t == Termination::BudgetExceeded) {
      transcript_.push_back(Event{EventKind::Halt, std::string(msg::kBudgetExceeded), std::nullopt, steps_used_ + 1});
    } else if (t == Termination::InputExhausted) {
      transcript_.push_back(Event{EventKind::Halt, std::string(msg::kInputExhausted), std::nullopt, steps_used_ + 1});
    }
  }

  void iteration_check() {
    Frame& f = frames_.back();
    switch (f.kind) {
      case FrameKind::Repeat:
        tick();
        if (f.remaining == 0) {
          frames_.pop_back();
        } else {
          --f.remaining;
          f.pc = 0;
        }
        break;
      case FrameKind::Forever:
        tick();
        f.pc = 0;
        break;
      case FrameKind::RepeatUntil: {
        const Value cond = eval_slot(*f.owner, "CONDITION");
        tick();
        Frame& g = frames_.back();
        if (is_yes(cond)) {
          frames_.pop_back();
        } else {
          g.pc = 0;
        }
        break;
      }
      case FrameKind::ForEach:
        tick();
        if (f.next < f.elements.size()) {
          f.current = f.elements[f.next++];
          f.pc = 0;
        } else {
          frames_.pop_back();
        }
        break;
      case FrameKind::Plain:
        frames_.pop_back();
        break;
    }
  }

  Value* find_variable(const std::string& name) {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? nullptr : &variables_[it->second].second;
  }

  Value eval(const Input& in) {
    if (const auto* l = in.as_literal()) return Value(l->text);
    if (const auto* v = in.as_variable()) {
      if (const Value* bound = find_variable(v->name)) return *bound;
      tick();
      emit(EventKind::RuntimeError, "Unknown variable " + v->name);
      return Value();
    }
    return eval_reporter(*in.as_block());
  }

  Value eval_slot(const BlockInstance& b, std::string_view slot) {
    const Input* in = b.input(slot);
    return in ? eval(*in) : Value();
  }

  template <class Ds, class Fn>
  Value with_ds(const Value& id, Fn&& fn) {
    auto r = registry_.resolve_as<Ds>(id);
    if (!r) return runtime_error(r.error().message);
    return fn(**r);
  }

  Value set_algebra(const BlockInstance& b, SetOp op) {
    const Value left_id = eval_slot(b, "OBJ_ID");
    const Value right_id = eval_slot(b, "OTHER_ID");
    tick();
    auto left = registry_.resolve_as<SetDs>(left_id);
    if (!left) return runtime_error(left.error().message);
    auto right = registry_.resolve_as<SetDs>(right_id);
    if (!right) return runtime_error(right.error().message);
    return Value(registry_.adopt(set_combine(**left, **right, op)));
  }

  Value eval_reporter(const BlockInstance& b) {
    using detail::Op;
    const Op op = detail::op_of(b.opcode);
    switch (op) {
      case Op::CreateNewArray: tick(); return Value(registry_.create(DsKind::Array));
      case Op::CreateNewSet: tick(); return Value(registry_.create(DsKind::Set));
      case Op::CreateNewDictionary: tick(); return Value(registry_.create(DsKind::Dict));

      case Op::ItemOfArray: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value index = eval_slot(b, "INDEX");
        tick();
        return with_ds<ArrayDs>(id, [&](ArrayDs& a) {
          auto item = array_item_at(a, index);
          return item ? *item : runtime_error(item.error().message);
        });
      }
      case Op::LengthOfArray: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        return with_ds<ArrayDs>(id, [](ArrayDs& a) { return array_length(a); });
      }
      case Op::SearchInArray: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value item = eval_slot(b, "ITEM");
        tick();
        return with_ds<ArrayDs>(id, [&](ArrayDs& a) { return array_search(a, item); });
      }

      case Op::IsSetEmpty: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        return with_ds<SetDs>(id, [](SetDs& s) { return set_is_empty(s); });
      }
      case Op::CheckContainInSet: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value element = eval_slot(b, "ELEMENT");
        tick();
        return with_ds<SetDs>(id, [&](SetDs& s) { return set_contains(s, element); });
      }
      case Op::SizeOfSet: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        return with_ds<SetDs>(id, [](SetDs& s) { return set_size(s); });
      }
      case Op::UnionOfSets: return set_algebra(b, SetOp::Union);
      case Op::IntersectionOfSets: return set_algebra(b, SetOp::Intersection);
      case Op::DifferenceOfSets: return set_algebra(b, SetOp::Difference);

      case Op::GetValueForKey: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value key = eval_slot(b, "KEY");
        tick();
        return with_ds<DictDs>(id, [&](DictDs& d) {
          auto v = dict_get(d, key);
          return v ? *v : runtime_error(v.error().message);
        });
      }
      case Op::ContainsKey: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value key = eval_slot(b, "KEY");
        tick();
        return with_ds<DictDs>(id, [&](DictDs& d) { return dict_has_key(d, key); });
      }
      case Op::SizeOfDictionary: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        return with_ds<DictDs>(id, [](DictDs& d) { return dict_size(d); });
      }

      case Op::CurrentElement: {
        tick();
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
          if (it->kind == FrameKind::ForEach && it->current) return *it->current;
        }
        return runtime_error(msg::kNoCurrentElement);
      }
      case Op::Answer: tick(); return answer_;

      case Op::Equals:
      case Op::LessThan:
      case Op::GreaterThan: {
        const Value a = eval_slot(b, "OPERAND1");
        const Value c = eval_slot(b, "OPERAND2");
        tick();
        const auto ord = compare(a, c);
        if (op == Op::Equals) return Value::boolean(ord == 0);
        return Value::boolean(op == Op::LessThan ? ord < 0 : ord > 0);
      }
      case Op::And:
      case Op::Or: {
        const Value a = eval_slot(b, "OPERAND1");
        const Value c = eval_slot(b, "OPERAND2");
        tick();
        return Value::boolean(op == Op::And ? (is_yes(a) && is_yes(c)) : (is_yes(a) || is_yes(c)));
      }
      case Op::Not: {
        const Value a = eval_slot(b, "OPERAND");
        tick();
        return Value::boolean(!is_yes(a));
      }
      case Op::Join: {
        const Value a = eval_slot(b, "STRING1");
        const Value c = eval_slot(b, "STRING2");
        tick();
        return Value(a.text + c.text);
      }
      case Op::StringContains: {
        const Value hay = eval_slot(b, "STRING1");
        const Value needle = eval_slot(b, "STRING2");
        tick();
        return Value::boolean(fold_case(hay.text).find(fold_case(needle.text)) != std::string::npos);
      }
      case Op::Add:
      case Op::Subtract:
      case Op::Multiply:
      case Op::Divide: {
        const double x = to_number(eval_slot(b, "NUM1"));
        const double y = to_number(eval_slot(b, "NUM2"));
        tick();
        switch (op) {
          case Op::Add: return Value::number(x + y);
          case Op::Subtract: return Value::number(x - y);
          case Op::Multiply: return Value::number(x * y);
          default:
            if (y == 0) {
              emit(EventKind::RuntimeError, std::string(msg::kDivisionByZero));
              return Value("0");
            }
            return Value::number(x / y);
        }
      }
      default:
        // A stack block in a value position; validation rejects this, but a
        // hand-built project can still contain it.
        for (const auto& [name, in] : b.inputs) eval(in);
        tick();
        return Value();
    }
  }

  void exec_stack_block(const BlockInstance& b) {
    using detail::Op;
    const Op op = detail::op_of(b.opcode);
    switch (op) {
      case Op::WhenStarted: tick(); return;

      case Op::Say: {
        Value m = eval_slot(b, "MESSAGE");
        tick();
        emit(EventKind::Say, std::move(m.text));
        return;
      }
      case Op::SayForSecs: {
        Value m = eval_slot(b, "MESSAGE");
        const double secs = to_number(eval_slot(b, "SECS"));
        tick();
        emit(EventKind::SayForSecs, std::move(m.text), secs);
        return;
      }
      case Op::Ask: {
        Value q = eval_slot(b, "QUESTION");
        tick();
        emit(EventKind::AskPrompt, std::move(q.text));
        state_ = State::WaitingForInput;
        return;
      }

      case Op::SetVariable:
      case Op::ChangeVariable: {
        const Value v = eval_slot(b, "VALUE");
        tick();
        const Input* target = b.input("VARIABLE");
        const VariableRef* ref = target ? target->as_variable() : nullptr;
        Value* slot = ref ? find_variable(ref->name) : nullptr;
        if (slot == nullptr) {
          emit(EventKind::RuntimeError, "Unknown variable " + (ref ? ref->name : std::string()));
          return;
        }
        *slot = op == Op::SetVariable ? v : Value::number(to_number(*slot) + to_number(v));
        return;
      }

      case Op::AddToArray: {
        const Value id = eval_slot(b, "OBJ_ID");
        Value item = eval_slot(b, "ITEM");
        tick();
        with_ds<ArrayDs>(id, [&](ArrayDs& a) { array_add(a, std::move(item)); return Value(); });
        return;
      }
      case Op::SortAscending:
      case Op::SortDescending: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        const auto dir = op == Op::SortAscending ? SortDirection::Ascending : SortDirection::Descending;
        with_ds<ArrayDs>(id, [&](ArrayDs& a) { array_sort(a, dir); return Value(); });
        return;
      }
      case Op::AddToSet: {
        const Value id = eval_slot(b, "OBJ_ID");
        Value element = eval_slot(b, "ELEMENT");
        tick();
        with_ds<SetDs>(id, [&](SetDs& s) { set_add(s, std::move(element)); return Value(); });
        return;
      }
      case Op::AddKeyValue: {
        const Value id = eval_slot(b, "OBJ_ID");
        Value key = eval_slot(b, "KEY");
        Value value = eval_slot(b, "VALUE");
        tick();
        with_ds<DictDs>(id, [&](DictDs& d) { dict_put(d, std::move(key), std::move(value)); return Value(); });
        return;
      }
      case Op::RemoveKey: {
        const Value id = eval_slot(b, "OBJ_ID");
        const Value key = eval_slot(b, "KEY");
        tick();
        with_ds<DictDs>(id, [&](DictDs& d) { dict_remove(d, key); return Value(); });
        return;
      }

      case Op::Repeat: {
        const double n = std::round(to_number(eval_slot(b, "TIMES")));
        tick();
        Frame& f = push_body(b.substack ? &*b.substack : nullptr, FrameKind::Repeat, &b);
        f.remaining = n <= 0 ? 0 : n >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(n);
        return;
      }
      case Op::RepeatUntil:
        tick();
        push_body(b.substack ? &*b.substack : nullptr, FrameKind::RepeatUntil, &b);
        return;
      case Op::Forever:
        tick();
        push_body(b.substack ? &*b.substack : nullptr, FrameKind::Forever, &b);
        return;
      case Op::IfThen:
      case Op::IfElse: {
        const Value cond = eval_slot(b, "CONDITION");
        tick();
        const auto& branch = is_yes(cond) ? b.substack : b.substack2;
        if (op == Op::IfThen && !is_yes(cond)) return;
        if (branch && !branch->blocks.empty()) push_body(&*branch, FrameKind::Plain, &b);
        return;
      }
      case Op::ForEachElementIn: {
        const Value id = eval_slot(b, "OBJ_ID");
        tick();
        const DsObject* obj = registry_.find(id);
        if (obj == nullptr) {
          const auto family = parse_object_id(id.text);
          emit(EventKind::RuntimeError,
               family ? invalid_object_message(*family) : std::string(msg::kInvalidStructure));
          return;
        }
        auto elements = ds_elements_snapshot(*obj);
        Frame& f = push_body(b.substack ? &*b.substack : nullptr, FrameKind::ForEach, &b);
        f.elements = std::move(elements);
        return;
      }

      default:
        // Reporters dropped into a stack run for their effects only.
        eval_reporter(b);
        return;
    }
  }

  std::shared_ptr<const Project> project_;
  std::uint64_t budget_;
  std::uint64_t steps_used_ = 0;
  Registry registry_;
  std::vector<std::pair<std::string, Value>> variables_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::vector<Frame> frames_;
  std::size_t next_script_ = 0;
  std::vector<Event> transcript_;
  Value answer_;
  State state_ = State::Running;
  Termination status_ = Termination::Completed;
};

/// Runs a project with answers supplied up front. Asks beyond the supplied
/// answers end the run with INPUT_EXHAUSTED.
inline SessionResult run(const Project& project, const std::vector<std::string>& inputs, std::uint64_t seed = 0,
                         std::uint64_t step_budget = kDefaultStepBudget) {
  Interpreter interp(project, RunOptions{seed, step_budget});
  std::size_t next = 0;
  while (interp.resume() == Interpreter::State::WaitingForInput) {
    if (next < inputs.size()) {
      interp.provide_answer(inputs[next++]);
    } else {
      interp.abandon_input();
    }
  }
  return interp.result();
}

// --- SessionResult serialization ---------------------------------------------

inline nlohmann::ordered_json number_json(double d) {
  if (d == std::floor(d) && std::fabs(d) < 9007199254740992.0) return static_cast<std::int64_t>(d);
  return d;
}

inline nlohmann::ordered_json to_json(const Event& e) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(e.kind);
  j["text"] = e.text;
  if (e.duration) j["duration"] = number_json(*e.duration);
  j["step_index"] = e.step_index;
  return j;
}

inline nlohmann::ordered_json variables_json(const std::vector<std::pair<std::string, Value>>& vars) {
  auto j = nlohmann::ordered_json::object();
  for (const auto& [name, v] : vars) j[name] = v.text;
  return j;
}

inline nlohmann::ordered_json to_json(const SessionResult& r) {
  nlohmann::ordered_json j;
  j["status"] = to_string(r.status);
  j["steps_used"] = r.steps_used;
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : r.transcript) events.push_back(to_json(e));
  j["transcript"] = std::move(events);
  j["variables"] = variables_json(r.variables);
  j["registry"] = to_json(r.registry);
  return j;
}

inline std::string dump_json(const nlohmann::ordered_json& j) {
  return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

inline std::string serialize_result(const SessionResult& r) { return dump_json(to_json(r)); }

/// Inverse of serialize_result. Throws std::invalid_argument on a document
/// that is not a session result.
inline SessionResult parse_session_result(std::string_view text) {
  const auto j = nlohmann::ordered_json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("not a JSON object");
  try {
    SessionResult r;
    const auto status = j.at("status").get<std::string>();
    bool known = false;
    for (auto t : {Termination::Completed, Termination::BudgetExceeded, Termination::InputExhausted}) {
      if (status == to_string(t)) r.status = t, known = true;
    }
    if (!known) throw std::invalid_argument("unknown status " + status);
    r.steps_used = j.at("steps_used").get<std::uint64_t>();
    for (const auto& je : j.at("transcript")) {
      Event e{};
      const auto kind = je.at("kind").get<std::string>();
      bool kind_known = false;
      for (auto k : {EventKind::Say, EventKind::SayForSecs, EventKind::AskPrompt, EventKind::RuntimeError,
                     EventKind::Halt}) {
        if (kind == to_string(k)) e.kind = k, kind_known = true;
      }
      if (!kind_known) throw std::invalid_argument("unknown event kind " + kind);
      e.text = je.at("text").get<std::string>();
      if (je.contains("duration")) e.duration = je.at("duration").get<double>();
      e.step_index = je.at("step_index").get<std::uint64_t>();
      r.transcript.push_back(std::move(e));
    }
    for (const auto& [name, v] : j.at("variables").items()) r.variables.emplace_back(name, Value(v.get<std::string>()));
    for (const auto& jo : j.at("registry")) {
      ObjectSnapshot s;
      s.id = jo.at("id").get<std::string>();
      const auto family = parse_object_id(s.id);
      if (!family) throw std::invalid_argument("bad object id " + s.id);
      s.kind = *family;
      if (s.kind == DsKind::Dict) {
        for (const auto& p : jo.at("pairs")) {
          s.pairs.emplace_back(Value(p.at("key").get<std::string>()), Value(p.at("value").get<std::string>()));
        }
      } else {
        for (const auto& el : jo.at("elements")) s.elements.emplace_back(el.get<std::string>());
      }
      r.registry.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

namespace detail {
inline std::string one_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\n') out += "\\n";
    else if (c == '\r') out += "\\r";
    else out += c;
  }
  return out;
}
}  // namespace detail

/// Line-oriented transcript: one line per event, then variables, data
/// structures, and the final status.
inline std::string render_text(const SessionResult& r) {
  using detail::one_line;
  std::string out;
  for (const auto& e : r.transcript) {
    switch (e.kind) {
      case EventKind::Say: out += "SAY: "; break;
      case EventKind::SayForSecs: out += "SAY (for " + format_number(e.duration.value_or(0)) + " seconds): "; break;
      case EventKind::AskPrompt: out += "ASK: "; break;
      case EventKind::RuntimeError: out += "ERROR: "; break;
      case EventKind::Halt: out += "HALT: "; break;
    }
    out += one_line(e.text);
    out += '\n';
  }
  out += "--- variables ---\n";
  for (const auto& [name, v] : r.variables) out += name + " = " + one_line(v.text) + "\n";
  out += "--- data structures ---\n";
  for (const auto& s : r.registry) {
    nlohmann::ordered_json contents;
    if (s.kind == DsKind::Dict) {
      contents = nlohmann::ordered_json::object();
      for (const auto& [k, v] : s.pairs) contents[k.text] = v.text;
    } else {
      contents = nlohmann::ordered_json::array();
      for (const auto& v : s.elements) contents.push_back(v.text);
    }
    out += s.id + " = " + contents.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
  }
  out += "--- status ---\n";
  out += std::string(to_string(r.status)) + " after " + std::to_string(r.steps_used) + " steps\n";
  return out;
}

}  // namespace blockdsa
