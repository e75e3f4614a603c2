"""Deep Optimisation search engine.

Two interlocked cycles: an inner greedy solution cycle whose variation
operator is defined by the current autoencoder depth, and an outer loop that
trains the autoencoder online on each locally optimised solution.  At depth
0 the variation is the problem's naive move; at depth n >= 1 a proposal
overwrites one latent component at hidden layer n with a uniform draw from
{-1, +1}, decodes to the visible layer and reinterprets a candidate
solution.  Moves that do not decrease fitness are kept, so neutral latent
drift accumulates.

Transitions deepen the search: in layerwise mode each scheduled transition
adds one hidden layer (until the configured maximum) and moves the variation
source one layer down; in end-to-end mode the full stack exists from the
start and the single transition jumps the variation source straight to the
deepest layer.

Randomness is split into two streams derived from the run seed with
``SeedSequence(seed).spawn(2)``: child 0 drives weight initialisation, child
1 drives the search (resets, proposals, interpretation).  With no hidden
layers the engine consumes the search stream exactly like a plain restart
hill climber using the naive move.
"""

from dataclasses import dataclass, field

import numpy as np

from .autoencoder import Autoencoder

LAYERWISE = "layerwise"
END_TO_END = "end_to_end"


@dataclass
class RunConfig:
    """Full parameterisation of one engine run.

    ``learning_rate`` is a float, or a sequence with one entry per phase
    (a phase ends at each transition).  Depth >= 1 cycles mix latent and
    naive proposals through one of two exclusive knobs: ``naive_every=k``
    makes every k-th proposal naive (2 gives the 1:1 alternation used for
    tours), ``latent_every=k`` makes every k-th proposal latent and the
    rest naive (for problems whose local search deserves most of the
    budget).  Both 0 means pure latent search.  ``target_fitness`` only
    instruments the log; ``stop_at_fitness`` ends the run early once a
    cycle attains the value.
    """

    steps_per_solution: int
    total_solutions: int
    hidden_sizes: tuple = ()
    transition_schedule: tuple = ()
    learning_rate: float = 0.01
    mode: str = LAYERWISE
    seed: int = 0
    train_repeats: int = 1
    naive_every: int = 0
    latent_every: int = 0
    target_fitness: float = None
    stop_at_fitness: float = None

    def validate(self):
        if self.steps_per_solution < 0 or self.total_solutions < 0:
            raise ValueError("step and solution budgets must be >= 0")
        if self.mode not in (LAYERWISE, END_TO_END):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden sizes must be >= 1")
        schedule = tuple(self.transition_schedule)
        if any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError("transition schedule must be strictly increasing")
        if any(s < 1 for s in schedule):
            raise ValueError("transition points are 1-based solution counts")
        n_layers = len(self.hidden_sizes)
        if self.mode == LAYERWISE:
            if len(schedule) != n_layers:
                raise ValueError(
                    "layerwise mode needs one transition per hidden layer "
                    f"({n_layers}), got {len(schedule)}"
                )
        else:
            if n_layers == 0:
                raise ValueError("end-to-end mode needs at least one hidden layer")
            if len(schedule) != 1:
                raise ValueError("end-to-end mode uses a single transition")
        for lr in self.phase_learning_rates():
            if lr <= 0:
                raise ValueError("learning rates must be positive")
        if self.train_repeats < 1:
            raise ValueError("train_repeats must be >= 1")
        if self.naive_every < 0 or self.latent_every < 0:
            raise ValueError("proposal mixing periods must be >= 0")
        if self.naive_every and self.latent_every:
            raise ValueError("naive_every and latent_every are exclusive")

    def phase_learning_rates(self):
        """One learning rate per phase (number of transitions + 1)."""
        phases = len(tuple(self.transition_schedule)) + 1
        if np.isscalar(self.learning_rate):
            return (float(self.learning_rate),) * phases
        rates = tuple(float(v) for v in self.learning_rate)
        if len(rates) != phases:
            raise ValueError(f"expected {phases} per-phase learning rates")
        return rates


@dataclass(slots=True)
class SearchState:
    """Current point of one solution cycle.

    ``depth`` 0 means naive search (no latent); at depth n >= 1 ``latent``
    holds the activations of hidden layer n that decode to ``solution``.
    ``fitness`` always caches ``problem.fitness(solution)``.
    """

    depth: int
    latent: object
    solution: object
    fitness: float


@dataclass(slots=True)
class CycleRecord:
    cycle: int
    fitness: float
    depth: int
    accepted: int
    loss: float


@dataclass
class RunLog:
    records: list = field(default_factory=list)
    best_solution: object = None
    best_fitness: float = -np.inf
    evaluations: int = 0
    evals_to_target: int = None
    solutions_to_target: int = None


@dataclass
class EngineState:
    """Model plus the depth currently generating variation."""

    model: object
    variation_depth: int
    hidden_sizes: tuple
    mode: str

    @property
    def max_depth(self):
        return len(self.hidden_sizes)


def accept_rule(parent_fitness, candidate_fitness):
    """Keep a candidate iff fitness did not decrease (neutral moves kept)."""
    if not (np.isfinite(parent_fitness) and np.isfinite(candidate_fitness)):
        raise ValueError("non-finite fitness; problem implementation is broken")
    return candidate_fitness >= parent_fitness


def reset_state(model, depth, problem, rng):
    """Fresh search state: random solution at depth 0, decoded U[-1,1]
    latent at depth n >= 1.  Costs exactly one fitness evaluation."""
    if depth == 0:
        solution = problem.random_solution(rng)
        return SearchState(0, None, solution, problem.fitness(solution))
    if model is None or depth > model.depth:
        raise ValueError(f"depth {depth} exceeds model depth")
    latent = rng.uniform(-1.0, 1.0, size=model.hidden_size(depth))
    solution = problem.interpret(model.decode(latent, depth), rng)
    return SearchState(depth, latent, solution, problem.fitness(solution))


def propose_variation(state, model, problem, rng):
    """One variation proposal; the input state is never mutated.

    Depth 0 delegates to the problem's naive move.  At depth n >= 1 one
    uniformly chosen latent component is overwritten with a uniform draw
    from {-1, +1} and the result is decoded and interpreted.  When the
    drawn value equals the current component and interpretation is
    deterministic, the candidate provably equals the parent, so the
    returned state shares the parent's arrays instead of re-decoding.
    """
    if state.depth == 0:
        solution = problem.naive_variation(state.solution, rng)
        return SearchState(0, None, solution, problem.fitness(solution))
    j = rng.integers(len(state.latent))
    value = 1.0 if rng.random() < 0.5 else -1.0
    if state.latent[j] == value and problem.deterministic_interpretation:
        return SearchState(state.depth, state.latent, state.solution, state.fitness)
    latent = state.latent.copy()
    latent[j] = value
    solution = problem.interpret(model.decode(latent, state.depth), rng)
    return SearchState(state.depth, latent, solution, problem.fitness(solution))


def solution_cycle(
    state,
    model,
    problem,
    steps,
    rng,
    naive_every=0,
    latent_every=0,
    observer=None,
    cycle_index=0,
    target_fitness=None,
):
    """Run ``steps`` propose/accept attempts from ``state``.

    Returns ``(state, accepted, hit_step)`` where ``hit_step`` is the
    1-based proposal index at which fitness first reached
    ``target_fitness`` (None when it never did, 0 when the incoming state
    already had).  Every proposal costs one fitness evaluation.
    """
    accepted = 0
    hit_step = None
    if target_fitness is not None and state.fitness >= target_fitness:
        hit_step = 0
    mixing = state.depth >= 1
    for step in range(1, steps + 1):
        if mixing and (
            (naive_every and step % naive_every == 0)
            or (latent_every and step % latent_every != 0)
        ):
            solution = problem.naive_variation(state.solution, rng)
            candidate = SearchState(
                state.depth, state.latent, solution, problem.fitness(solution)
            )
        else:
            candidate = propose_variation(state, model, problem, rng)
        if accept_rule(state.fitness, candidate.fitness):
            accepted += 1
            if observer is not None:
                observer(cycle_index, state, candidate)
            state = candidate
            if (
                hit_step is None
                and target_fitness is not None
                and state.fitness >= target_fitness
            ):
                hit_step = step
    return state, accepted, hit_step


def transition(engine_state, rng):
    """Fire one transition, mutating ``engine_state``.

    Layerwise: grow the stack by one layer (unless already at the
    configured maximum) and move the variation source one layer deeper.
    End-to-end: jump the variation source to the deepest layer.
    """
    if engine_state.variation_depth >= engine_state.max_depth:
        raise ValueError("already at maximum variation depth")
    if engine_state.mode == END_TO_END:
        engine_state.variation_depth = engine_state.max_depth
        return engine_state
    model = engine_state.model
    if model.depth < engine_state.max_depth:
        model.add_layer(engine_state.hidden_sizes[model.depth], rng)
    engine_state.variation_depth += 1
    return engine_state


def _build_model(config, visible_size, rng):
    if not config.hidden_sizes:
        return None
    if config.mode == END_TO_END:
        model = Autoencoder(visible_size, config.hidden_sizes[0], rng)
        for size in config.hidden_sizes[1:]:
            model.add_layer(size, rng)
        return model
    return Autoencoder(visible_size, config.hidden_sizes[0], rng)


def run(config, problem, observer=None):
    """Execute one full Deep Optimisation run and return its log.

    Per solution cycle: reset (one evaluation), ``steps_per_solution``
    proposals (one evaluation each), then ``train_repeats`` online updates
    on the optimised solution's encoding.  Scheduled transitions fire after
    the stated number of completed cycles.  ``observer``, when given, is
    called as ``observer(cycle, parent_state, candidate_state)`` on every
    accepted proposal.
    """
    config.validate()
    seq = np.random.SeedSequence(config.seed)
    model_seq, search_seq = seq.spawn(2)
    rng_model = np.random.default_rng(model_seq)
    rng_search = np.random.default_rng(search_seq)

    engine_state = EngineState(
        model=_build_model(config, problem.visible_size, rng_model),
        variation_depth=0,
        hidden_sizes=tuple(config.hidden_sizes),
        mode=config.mode,
    )
    schedule = list(config.transition_schedule)
    rates = config.phase_learning_rates()
    phase = 0

    log = RunLog()
    for cycle in range(1, config.total_solutions + 1):
        state = reset_state(
            engine_state.model, engine_state.variation_depth, problem, rng_search
        )
        log.evaluations += 1
        if (
            log.evals_to_target is None
            and config.target_fitness is not None
            and state.fitness >= config.target_fitness
        ):
            log.evals_to_target = log.evaluations
            log.solutions_to_target = cycle

        state, accepted, hit_step = solution_cycle(
            state,
            engine_state.model,
            problem,
            config.steps_per_solution,
            rng_search,
            naive_every=config.naive_every,
            latent_every=config.latent_every,
            observer=observer,
            cycle_index=cycle,
            target_fitness=config.target_fitness if log.evals_to_target is None else None,
        )
        evals_before = log.evaluations
        log.evaluations += config.steps_per_solution
        if log.evals_to_target is None and hit_step:
            log.evals_to_target = evals_before + hit_step
            log.solutions_to_target = cycle

        loss = None
        if engine_state.model is not None:
            encoded = problem.encode_solution(state.solution)
            for _ in range(config.train_repeats):
                loss = engine_state.model.train_step(encoded, rates[phase])

        log.records.append(
            CycleRecord(cycle, state.fitness, state.depth, accepted, loss)
        )
        if state.fitness > log.best_fitness:
            log.best_fitness = state.fitness
            log.best_solution = state.solution.copy()

        while schedule and schedule[0] == cycle:
            schedule.pop(0)
            transition(engine_state, rng_model)
            phase += 1

        if (
            config.stop_at_fitness is not None
            and state.fitness >= config.stop_at_fitness
        ):
            break
    return log
