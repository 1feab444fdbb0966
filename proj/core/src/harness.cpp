#include "doubtfire/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <queue>
#include <random>

#include "doubtfire/errors.hpp"
#include "doubtfire/wire.hpp"

namespace doubtfire {

void validate(const SimConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.grid.dim != 1 && c.grid.dim != 2) fail("grid.dim must be 1 or 2");
  if (c.grid.cells_per_dim < 3) fail("grid.cells must be >= 3");
  if (c.solver.order < 2) fail("solver.order must be >= 2");
  if (c.solver.order > 16) fail("solver.order must be <= 16");
  if (!(c.solver.gamma > 1.0)) fail("solver.gamma must be > 1");
  if (!(c.solver.cfl > 0.0)) fail("solver.cfl must be > 0");
  if (!(c.tol.tol_y >= 0.0) || !(c.tol.tol_dt >= 0.0) || !(c.tol.tol_der >= 0.0)) fail("tolerances must be >= 0");
  if (!(c.denom_floor > 0.0)) fail("tolerances.denom_floor must be > 0");
  if (!(c.channel.latency >= 0.0) || !(c.channel.jitter >= 0.0)) fail("channel latency and jitter must be >= 0");
  if (!(c.cost.task >= 0.0) || !(c.cost.criteria_cheap >= 0.0) || !(c.cost.criteria_der >= 0.0) ||
      !(c.cost.adopt >= 0.0)) {
    fail("cost entries must be >= 0");
  }
  if (!(c.cost.check > 0.0)) fail("cost.check must be > 0 (it paces check-task polling)");
  if (c.steps < 1) fail("run.steps must be >= 1");
  if (c.starvation_bound < 1) fail("starvation bound must be >= 1");
  if (!c.sharing && !c.criteria.none()) fail("run.sharing = false requires tolerances.criteria = none");
}

CriteriaConfig criteria_config(const SimConfig& c) {
  CriteriaConfig cfg;
  cfg.gamma = c.solver.gamma;
  cfg.tol = c.tol;
  cfg.denom_floor = c.denom_floor;
  cfg.cell_width = c.grid.cell_width();
  cfg.enabled = c.criteria;
  cfg.der_all_unknowns = c.der_all_unknowns;
  return cfg;
}

CheckTask::Poll CheckTask::poll(const OutcomeCache& cache) {
  if (cache.contains(id_, Origin::Remote)) return Poll::Ready;
  if (++reschedules_ > bound_) {
    throw StarvationGuard("check task for step " + std::to_string(id_.step) + " cell " +
                          std::to_string(id_.cell) + " rescheduled " + std::to_string(reschedules_) +
                          " times without a counterpart outcome");
  }
  return Poll::Rescheduled;
}

CheckTask spawn_check_task(const TaskId& id, std::uint64_t bound) { return CheckTask(id, bound); }

namespace {

struct InFlight {
  double arrival;
  std::uint64_t seq;
  std::vector<std::uint8_t> frame;

  bool operator>(const InFlight& o) const { return arrival != o.arrival ? arrival > o.arrival : seq > o.seq; }
};

class Channel {
 public:
  Channel(const ChannelModel& model, const PolynomialShape& shape)
      : model_(model), shape_(shape), rng_(model.jitter_seed) {}

  void send(TeamId to, double now, std::vector<std::uint8_t> frame) {
    double delay = model_.latency;
    if (model_.jitter > 0.0) delay += std::uniform_real_distribution<double>(0.0, model_.jitter)(rng_);
    if (model_.blackhole && *model_.blackhole == to) return;
    queues_[index(to)].push({now + delay, seq_++, std::move(frame)});
  }

  /// Next message for `to` that has arrived by `now`.
  std::optional<TeamMessage> receive(TeamId to, double now) {
    auto& q = queues_[index(to)];
    if (q.empty() || q.top().arrival > now) return std::nullopt;
    TeamMessage m = decode(q.top().frame, shape_);
    q.pop();
    return m;
  }

 private:
  ChannelModel model_;
  PolynomialShape shape_;
  std::mt19937_64 rng_;
  std::uint64_t seq_ = 0;
  std::array<std::priority_queue<InFlight, std::vector<InFlight>, std::greater<>>, 2> queues_;
};

struct Shared {
  const SimConfig& config;
  const Solver& solver;
  CriteriaConfig criteria;
  Channel channel;
  FaultInjector injector;
  RunMetrics& metrics;
  TraceLog& trace;
  /// Parallel to the injector log.
  std::vector<bool> detected;

  void mark_detected(const TaskId& id) {
    const auto& log = injector.log();
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (log[i].step == id.step && log[i].cell == id.cell) detected[i] = true;
    }
  }
};

class Team {
 public:
  Team(TeamId id, Bias bias, Shared& shared)
      : id_(id), bias_(bias), shared_(shared), state_(shared.solver.initial_state(shared.config.initial)) {
    begin_step();
  }

  TeamId id() const { return id_; }
  double clock() const { return clock_; }
  bool finished() const { return finished_; }
  const SolverState& state() const { return state_; }

  void receive_due() {
    while (auto m = shared_.channel.receive(id_, clock_)) on_receive(std::move(m->outcome));
  }

  void act() {
    if (!ready_.empty()) {
      const std::uint32_t cell = ready_.front();
      ready_.pop_front();
      run_predictor(cell);
    } else if (!checks_.empty()) {
      CheckTask task = checks_.front();
      checks_.pop_front();
      run_check(task);
    } else {
      throw std::logic_error("team has neither ready tasks nor checks but step is unresolved");
    }
  }

 private:
  void begin_step() {
    const std::size_t cells = state_.field.size();
    approved_.assign(cells, std::nullopt);
    resolved_.assign(cells, 0);
    unresolved_ = cells;
    ready_.clear();
    for (std::uint32_t c = 0; c < cells; ++c) {
      ready_.push_back(bias_ == Bias::Forward ? c : static_cast<std::uint32_t>(cells - 1 - c));
    }
    const std::size_t discarded = cache_.gc(state_.step);
    if (discarded > 0) {
      shared_.metrics.gc_discards += discarded;
      char detail[32];
      std::snprintf(detail, sizeof detail, "stale=%zu", discarded);
      shared_.trace.record(clock_, id_, EventKind::Gc, {state_.step, 0}, detail);
    }
  }

  void on_receive(TaskOutcome remote) {
    const TaskId id = remote.id;
    if (id.step < state_.step || (id.step == state_.step && resolved_[id.cell])) {
      // Crossed in the network or no longer needed.
      ++shared_.metrics.gc_discards;
      shared_.trace.record(clock_, id_, EventKind::Gc, id, "late");
      return;
    }
    cache_.insert(Origin::Remote, std::move(remote));
  }

  void install(std::uint32_t cell, CellPolynomial payload) {
    approved_[cell] = std::move(payload);
    resolved_[cell] = 1;
    if (--unresolved_ == 0) finish_step();
  }

  void finish_step() {
    state_ = shared_.solver.corrector(state_, approved_);
    if (state_.step >= shared_.config.steps) {
      finished_ = true;
      return;
    }
    begin_step();
  }

  void run_predictor(std::uint32_t cell) {
    const auto& cfg = shared_.config;
    const TaskId id{state_.step, cell};
    auto& metrics = shared_.metrics;

    const auto remote_dubious = cache_.dubious(id, Origin::Remote);
    if (remote_dubious && !*remote_dubious) {
      auto remote = cache_.take(id, Origin::Remote);
      const Verdict v = resolve(std::nullopt, remote, cfg.tol);
      (void)v;
      clock_ += cfg.cost.adopt;
      ++metrics.tasks_adopted[index(id_)];
      shared_.trace.record(clock_, id_, EventKind::Adopt, id);
      install(cell, std::move(remote->payload));
      return;
    }

    TaskOutcome local = shared_.solver.predictor_task(cell, state_);
    const bool injected = shared_.injector.maybe_inject(local, id_);
    if (injected) {
      local.local_dt = shared_.solver.admissible_dt(local.payload);
      shared_.detected.push_back(false);
    }
    local.criteria = evaluate(local.payload, state_.field[cell], local.local_dt, state_.dt_per_cell[cell],
                              shared_.criteria);
    local.dubious = dubiosity(local.criteria, cfg.tol);
    if (injected && local.dubious) shared_.detected.back() = true;

    clock_ += cfg.cost.task;
    if (cfg.criteria.any_cheap()) clock_ += cfg.cost.criteria_cheap;
    if (local.criteria.f_der_evaluated) clock_ += cfg.cost.criteria_der;
    ++metrics.tasks_computed[index(id_)];
    if (local.dubious) ++metrics.dubious_outcomes;
    shared_.trace.record(clock_, id_, EventKind::Compute, id, local.dubious ? "dubious" : "trusted");

    if (cfg.sharing) {
      shared_.channel.send(other(id_), clock_, encode({id_, local, clock_}));
      shared_.trace.record(clock_, id_, EventKind::Share, id);
    }

    if (!local.dubious) {
      if (remote_dubious) {
        cache_.take(id, Origin::Remote);
        ++metrics.gc_discards;
        shared_.trace.record(clock_, id_, EventKind::Gc, id, "dubious-remote");
      }
      install(cell, std::move(local.payload));
      return;
    }
    if (remote_dubious) {
      auto remote = cache_.take(id, Origin::Remote);
      compare(std::move(local), std::move(*remote));
      return;
    }
    cache_.insert(Origin::Local, std::move(local));
    checks_.push_back(spawn_check_task(id, cfg.starvation_bound));
    shared_.trace.record(clock_, id_, EventKind::CheckSpawn, id);
  }

  void run_check(CheckTask task) {
    if (task.poll(cache_) == CheckTask::Poll::Ready) {
      auto pair = cache_.take(task.id());
      compare(std::move(*pair.local), std::move(*pair.remote));
      return;
    }
    ++shared_.metrics.check_reschedules;
    clock_ += shared_.config.cost.check;
    checks_.push_back(task);
  }

  void compare(TaskOutcome local, TaskOutcome remote) {
    auto& metrics = shared_.metrics;
    const TaskId id = local.id;
    ++metrics.checks_performed;
    clock_ += shared_.config.cost.check;
    std::optional<TaskOutcome> l(std::move(local));
    std::optional<TaskOutcome> r(std::move(remote));
    const Verdict v = resolve(l, r, shared_.config.tol);
    if (v.disagreement) shared_.mark_detected(id);
    shared_.trace.record(clock_, id_, EventKind::CheckResolve, id, to_string(v.kind));
    switch (v.kind) {
      case Verdict::Kind::AcceptLocal:
        install(id.cell, std::move(l->payload));
        break;
      case Verdict::Kind::AdoptRemote:
        ++metrics.corrections;
        shared_.trace.record(clock_, id_, EventKind::Correct, id);
        install(id.cell, std::move(r->payload));
        break;
      case Verdict::Kind::ModerateKeepLocal:
        ++metrics.moderations;
        shared_.trace.record(clock_, id_, EventKind::Moderate, id, *v.warning);
        install(id.cell, std::move(l->payload));
        break;
      case Verdict::Kind::Fatal:
        ++metrics.fatals;
        shared_.trace.record(clock_, id_, EventKind::Fatal, id, *v.warning);
        throw FatalCorruption("step " + std::to_string(id.step) + " cell " + std::to_string(id.cell) + ": " +
                              *v.warning);
    }
  }

  TeamId id_;
  Bias bias_;
  Shared& shared_;
  SolverState state_;
  OutcomeCache cache_;
  double clock_ = 0.0;
  bool finished_ = false;
  std::deque<std::uint32_t> ready_;
  std::deque<CheckTask> checks_;
  std::vector<std::optional<CellPolynomial>> approved_;
  std::vector<std::uint8_t> resolved_;
  std::size_t unresolved_ = 0;
};

}  // namespace

SimResult run_simulation(const SimConfig& config, const SolverState* reference) {
  validate(config);
  const Solver solver(config.grid, config.solver);
  const PolynomialShape shape = solver.shape();
  const RunShape run_shape{config.steps, static_cast<std::uint32_t>(config.grid.cell_count()), shape.unknowns,
                           shape.nodes()};

  SimResult result;
  result.trace = TraceLog(config.trace);
  result.metrics.total_tasks = static_cast<std::uint64_t>(config.steps) * config.grid.cell_count();

  Shared shared{config, solver, criteria_config(config), Channel(config.channel, shape),
                FaultInjector(config.faults, run_shape), result.metrics, result.trace, {}};

  std::array<Team, 2> teams{Team(TeamId::A, Bias::Forward, shared), Team(TeamId::B, Bias::Reverse, shared)};
  try {
    while (!teams[0].finished() || !teams[1].finished()) {
      Team* next = nullptr;
      for (auto& t : teams) {
        if (t.finished()) continue;
        if (!next || t.clock() < next->clock()) next = &t;
      }
      next->receive_due();
      next->act();
    }
  } catch (const FatalCorruption& e) {
    result.fatal = e.what();
  }

  for (auto& t : teams) {
    result.metrics.team_cost[index(t.id())] = t.clock();
    result.final_states[index(t.id())] = t.state();
  }
  result.metrics.simulated_cost = 0.5 * (teams[0].clock() + teams[1].clock());

  result.injections = shared.injector.log();
  const bool clean = reference && !result.fatal && matches_reference(result, *reference);
  for (std::size_t i = 0; i < result.injections.size(); ++i) {
    auto& rec = result.injections[i];
    rec.detected = shared.detected[i];
    rec.corrected = clean && rec.detected && rec.error != 0.0;
  }
  return result;
}

SolverState run_baseline(const SimConfig& config) {
  validate(config);
  const Solver solver(config.grid, config.solver);
  return run_reference(solver, config.initial, config.steps);
}

bool matches_reference(const SimResult& result, const SolverState& reference) {
  for (const auto& state : result.final_states) {
    if (state.step != reference.step || state.field.size() != reference.field.size()) return false;
    for (std::size_t c = 0; c < state.field.size(); ++c) {
      if (!state.field[c].bitwise_equal(reference.field[c])) return false;
    }
  }
  return true;
}

}  // namespace doubtfire
