//! Exact solving on small boards by fixed-point computation.
//!
//! Covering is a safety game for the cops, so their winning set is the
//! greatest fixed point of the one-step safety operator; capture is a
//! reachability game solved as a least fixed point. Fixed-time games are a
//! finite unrolling solved by backward induction. Everything here is
//! brute force on purpose: these routines are the ground truth the
//! constructive strategies are audited against, so they stay as close to
//! the rules as possible and make no cleverness-for-speed trades beyond
//! treating the cops as an interchangeable multiset.
//!
//! All solvers take a [`SolveBudget`] and refuse instances whose state
//! space would not fit, reporting the estimate instead of thrashing.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::board::{BoardKind, Coord};
use crate::engine::{GameState, GameVariant, MatchSpec, RobberController};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolveBudget {
    pub max_states: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_states: 100_000_000,
        }
    }
}

/// Which extra coverage checks are in force (mirrors the engine flags).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRules {
    pub cover_at_start: bool,
    pub cover_after_robber: bool,
}

/// Board unrolled into an indexed cell list with move tables.
struct Arena {
    cells: Vec<Coord>,
    /// Cells a cop at index i may move to (distance <= 1, includes i).
    cop_moves: Vec<Vec<u32>>,
    /// Cells the robber at index i may move to (distance <= speed).
    robber_moves: Vec<Vec<u32>>,
}

impl Arena {
    fn new(board: &BoardKind, speed: i64) -> Result<Arena> {
        Arena::from_cells(board, board.cells()?, speed)
    }

    /// Arena over an explicit cell list; used to clip unbounded boards to
    /// the finite window a fixed-time game can actually reach.
    fn from_cells(board: &BoardKind, cells: Vec<Coord>, speed: i64) -> Result<Arena> {
        let index: HashMap<&Coord, u32> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i as u32))
            .collect();
        let reachable = |from: &Coord, s: i64| -> Result<Vec<u32>> {
            let mut out = Vec::new();
            for q in board.ball(from, s)? {
                // Clipped arenas drop out-of-window cells here.
                if let Some(&j) = index.get(&q) {
                    out.push(j);
                }
            }
            Ok(out)
        };
        let mut cop_moves = Vec::with_capacity(cells.len());
        let mut robber_moves = Vec::with_capacity(cells.len());
        for c in &cells {
            cop_moves.push(reachable(c, 1)?);
            robber_moves.push(reachable(c, speed)?);
        }
        Ok(Arena {
            cells,
            cop_moves,
            robber_moves,
        })
    }

    fn len(&self) -> usize {
        self.cells.len()
    }
}

/// All sorted m-multisets over the arena's cells, with the joint-move
/// relation between them. Cops are interchangeable, which shrinks the state
/// space by up to m! compared to tuples.
struct MultisetSpace {
    sets: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    /// Multisets reachable in one joint cop move (every cop steps <= 1).
    trans: Vec<Vec<u32>>,
}

fn count_multisets(v: u64, m: u64) -> u128 {
    // C(v + m - 1, m), exact.
    let mut num: u128 = 1;
    for i in 0..m {
        num = num.saturating_mul((v + i) as u128);
        num /= (i + 1) as u128;
    }
    num
}

impl MultisetSpace {
    fn build(arena: &Arena, m: usize) -> MultisetSpace {
        let v = arena.len() as u32;
        let mut sets = Vec::new();
        let mut cur = vec![0u32; m];
        fn gen(sets: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, lo: u32, v: u32) {
            if pos == cur.len() {
                sets.push(cur.clone());
                return;
            }
            for c in lo..v {
                cur[pos] = c;
                gen(sets, cur, pos + 1, c, v);
            }
        }
        if m == 0 {
            sets.push(Vec::new());
        } else {
            gen(&mut sets, &mut cur, 0, 0, v);
        }
        let index: HashMap<Vec<u32>, u32> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();

        // Joint moves, deduplicated as multisets.
        let mut trans = Vec::with_capacity(sets.len());
        for ms in &sets {
            let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
            let mut scratch = vec![0u32; ms.len()];
            fn joint(
                arena: &Arena,
                ms: &[u32],
                scratch: &mut Vec<u32>,
                pos: usize,
                seen: &mut std::collections::HashSet<Vec<u32>>,
            ) {
                if pos == ms.len() {
                    let mut dest = scratch.clone();
                    dest.sort_unstable();
                    seen.insert(dest);
                    return;
                }
                for &d in &arena.cop_moves[ms[pos] as usize] {
                    scratch[pos] = d;
                    joint(arena, ms, scratch, pos + 1, seen);
                }
            }
            joint(arena, ms, &mut scratch, 0, &mut seen);
            let mut dests: Vec<u32> = seen.into_iter().map(|d| index[&d]).collect();
            dests.sort_unstable();
            trans.push(dests);
        }
        MultisetSpace { sets, index, trans }
    }

    fn contains_cell(&self, mi: u32, cell: u32) -> bool {
        self.sets[mi as usize].binary_search(&cell).is_ok()
    }
}

fn check_budget(v: usize, m: usize, levels: u64, budget: SolveBudget) -> Result<u128> {
    let ms = count_multisets(v as u64, m as u64);
    let states = ms
        .saturating_mul(v as u128)
        .saturating_mul(levels as u128);
    if states > budget.max_states as u128 {
        return Err(Error::Budget(format!(
            "instance needs about {states} states ({ms} cop multisets over {v} cells), budget is {}",
            budget.max_states
        )));
    }
    Ok(states)
}

/// A solved covering instance: the set of states from which the cops can
/// satisfy every remaining coverage check forever.
pub struct CoveringSolve {
    arena: Arena,
    ms: MultisetSpace,
    pub board: BoardKind,
    pub m: usize,
    pub speed: i64,
    pub rules: CoverRules,
    /// Indexed by (multiset * V + robber) * 2 + phase, phase 0 = cops move.
    win: Vec<bool>,
    pub state_count: u64,
    pub iterations: u32,
}

const PH_COP: usize = 0;
const PH_ROB: usize = 1;

impl CoveringSolve {
    fn idx(&self, mi: u32, r: u32, phase: usize) -> usize {
        (mi as usize * self.arena.len() + r as usize) * 2 + phase
    }

    /// Cops about to move: some joint move both lands a cop on the robber
    /// and stays inside the winning set.
    fn safe_cop_turn(&self, mi: u32, r: u32) -> bool {
        self.ms.trans[mi as usize]
            .iter()
            .any(|&mj| self.ms.contains_cell(mj, r) && self.win[self.idx(mj, r, PH_ROB)])
    }

    /// Robber about to move: every reply passes the optional after-robber
    /// check and stays winning.
    fn safe_robber_turn(&self, mi: u32, r: u32) -> bool {
        self.arena.robber_moves[r as usize].iter().all(|&r2| {
            (!self.rules.cover_after_robber || self.ms.contains_cell(mi, r2))
                && self.win[self.idx(mi, r2, PH_COP)]
        })
    }

    fn sweep(&mut self) -> bool {
        let mut changed = false;
        for mi in 0..self.ms.sets.len() as u32 {
            for r in 0..self.arena.len() as u32 {
                let ic = self.idx(mi, r, PH_COP);
                if self.win[ic] && !self.safe_cop_turn(mi, r) {
                    self.win[ic] = false;
                    changed = true;
                }
                let ir = self.idx(mi, r, PH_ROB);
                if self.win[ir] && !self.safe_robber_turn(mi, r) {
                    self.win[ir] = false;
                    changed = true;
                }
            }
        }
        changed
    }

    /// True when one more application of the safety operator changes
    /// nothing; the defining property of the solve.
    pub fn is_fixed_point(&self) -> bool {
        for mi in 0..self.ms.sets.len() as u32 {
            for r in 0..self.arena.len() as u32 {
                if self.win[self.idx(mi, r, PH_COP)] != self.safe_cop_turn(mi, r) {
                    return false;
                }
                if self.win[self.idx(mi, r, PH_ROB)] != self.safe_robber_turn(mi, r) {
                    return false;
                }
            }
        }
        true
    }

    fn placement_beats(&self, mi: u32, r: u32) -> bool {
        (!self.rules.cover_at_start || self.ms.contains_cell(mi, r))
            && self.win[self.idx(mi, r, PH_COP)]
    }

    /// The game value: some placement works against every robber start.
    pub fn cops_win(&self) -> bool {
        self.winning_placement_index().is_some()
    }

    fn winning_placement_index(&self) -> Option<u32> {
        (0..self.ms.sets.len() as u32).find(|&mi| {
            (0..self.arena.len() as u32).all(|r| self.placement_beats(mi, r))
        })
    }

    /// A placement whose every robber reply is cop-winning, if one exists.
    pub fn winning_placement(&self) -> Option<Vec<Coord>> {
        self.winning_placement_index().map(|mi| {
            self.ms.sets[mi as usize]
                .iter()
                .map(|&c| self.arena.cells[c as usize].clone())
                .collect()
        })
    }
}

pub fn solve_covering(
    board: &BoardKind,
    m: usize,
    speed: i64,
    rules: CoverRules,
    budget: SolveBudget,
) -> Result<CoveringSolve> {
    let arena = Arena::new(board, speed)?;
    let states = check_budget(arena.len(), m, 2, budget)?;
    let ms = MultisetSpace::build(&arena, m);
    let mut solve = CoveringSolve {
        win: vec![true; ms.sets.len() * arena.len() * 2],
        state_count: states as u64,
        iterations: 0,
        board: *board,
        m,
        speed,
        rules,
        arena,
        ms,
    };
    while solve.sweep() {
        solve.iterations += 1;
    }
    Ok(solve)
}

pub fn cops_can_cover(
    board: &BoardKind,
    m: usize,
    speed: i64,
    rules: CoverRules,
    budget: SolveBudget,
) -> Result<bool> {
    Ok(solve_covering(board, m, speed, rules, budget)?.cops_win())
}

/// Covering value under symmetry reduction: states are canonicalized by the
/// board's point symmetries (axis swaps and per-axis flips) before solving.
/// Must always agree with [`cops_can_cover`]; exists so that the agreement
/// can be asserted rather than assumed.
pub fn cops_can_cover_symmetric(
    board: &BoardKind,
    m: usize,
    speed: i64,
    rules: CoverRules,
    budget: SolveBudget,
) -> Result<bool> {
    let arena = Arena::new(board, speed)?;
    check_budget(arena.len(), m, 2, budget)?;
    let ms = MultisetSpace::build(&arena, m);
    let group = symmetry_group(board, &arena);
    let v = arena.len();

    // Map every (multiset, robber) pair to the least transformed image.
    let canon_pairs = |mi: u32, r: u32| -> (u32, u32) {
        let mut best = (mi, r);
        for perm in &group {
            let mut cells: Vec<u32> = ms.sets[mi as usize]
                .iter()
                .map(|&c| perm[c as usize])
                .collect();
            cells.sort_unstable();
            let cand = (ms.index[&cells], perm[r as usize]);
            if cand < best {
                best = cand;
            }
        }
        best
    };

    let mut canon_cache: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
    let mut canon = |mi: u32, r: u32| -> (u32, u32) {
        *canon_cache.entry((mi, r)).or_insert_with(|| canon_pairs(mi, r))
    };

    // Winning flags stored per canonical (pair, phase).
    let mut win: HashMap<(u32, u32, usize), bool> = HashMap::new();
    let mut reps: Vec<(u32, u32)> = Vec::new();
    for mi in 0..ms.sets.len() as u32 {
        for r in 0..v as u32 {
            let key = canon(mi, r);
            if win.insert((key.0, key.1, PH_COP), true).is_none() {
                win.insert((key.0, key.1, PH_ROB), true);
                reps.push(key);
            }
        }
    }

    loop {
        let mut changed = false;
        for &(mi, r) in &reps {
            let cop_ok = ms.trans[mi as usize].iter().any(|&mj| {
                if !ms.contains_cell(mj, r) {
                    return false;
                }
                let k = canon(mj, r);
                win[&(k.0, k.1, PH_ROB)]
            });
            if win[&(mi, r, PH_COP)] && !cop_ok {
                win.insert((mi, r, PH_COP), false);
                changed = true;
            }
            let rob_ok = arena.robber_moves[r as usize].iter().all(|&r2| {
                if rules.cover_after_robber && !ms.contains_cell(mi, r2) {
                    return false;
                }
                let k = canon(mi, r2);
                win[&(k.0, k.1, PH_COP)]
            });
            if win[&(mi, r, PH_ROB)] && !rob_ok {
                win.insert((mi, r, PH_ROB), false);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    for mi in 0..ms.sets.len() as u32 {
        let all = (0..v as u32).all(|r| {
            if rules.cover_at_start && !ms.contains_cell(mi, r) {
                return false;
            }
            let k = canon(mi, r);
            win[&(k.0, k.1, PH_COP)]
        });
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Cell permutations induced by axis swaps and per-axis reflections, for
/// boards where every axis looks the same (square grids and tori).
fn symmetry_group(board: &BoardKind, arena: &Arena) -> Vec<Vec<u32>> {
    let d = board.axes();
    let n = board.n();
    if matches!(board, BoardKind::Tunnel { .. }) {
        return vec![(0..arena.len() as u32).collect()];
    }
    let index: HashMap<&Coord, u32> = arena
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i as u32))
        .collect();
    let mut perms_of_axes: Vec<Vec<usize>> = Vec::new();
    let mut axes: Vec<usize> = (0..d).collect();
    permute(&mut axes, 0, &mut perms_of_axes);

    let mut out = Vec::new();
    for axperm in &perms_of_axes {
        for mask in 0..(1u32 << d) {
            let mut table = vec![0u32; arena.len()];
            for (i, c) in arena.cells.iter().enumerate() {
                let mut q = c.clone();
                for a in 0..d {
                    let mut val = c[axperm[a]];
                    if mask & (1 << a) != 0 {
                        val = n + 1 - val;
                    }
                    q[a] = val;
                }
                table[i] = index[&q];
            }
            out.push(table);
        }
    }
    out
}

fn permute(axes: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == axes.len() {
        out.push(axes.clone());
        return;
    }
    for i in k..axes.len() {
        axes.swap(k, i);
        permute(axes, k + 1, out);
        axes.swap(k, i);
    }
}

/// Capture game: least fixed point of the reachability operator.
pub fn cops_can_catch(
    board: &BoardKind,
    m: usize,
    speed: i64,
    budget: SolveBudget,
) -> Result<bool> {
    let arena = Arena::new(board, speed)?;
    check_budget(arena.len(), m, 2, budget)?;
    let ms = MultisetSpace::build(&arena, m);
    let v = arena.len();
    let idx = |mi: u32, r: u32, ph: usize| (mi as usize * v + r as usize) * 2 + ph;
    let mut win = vec![false; ms.sets.len() * v * 2];

    loop {
        let mut changed = false;
        for mi in 0..ms.sets.len() as u32 {
            for r in 0..v as u32 {
                let ic = idx(mi, r, PH_COP);
                if !win[ic] {
                    let ok = ms.trans[mi as usize].iter().any(|&mj| {
                        ms.contains_cell(mj, r) || win[idx(mj, r, PH_ROB)]
                    });
                    if ok {
                        win[ic] = true;
                        changed = true;
                    }
                }
                let ir = idx(mi, r, PH_ROB);
                if !win[ir] {
                    let ok = arena.robber_moves[r as usize].iter().all(|&r2| {
                        ms.contains_cell(mi, r2) || win[idx(mi, r2, PH_COP)]
                    });
                    if ok {
                        win[ir] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    for mi in 0..ms.sets.len() as u32 {
        let all = (0..v as u32)
            .all(|r| ms.contains_cell(mi, r) || win[idx(mi, r, PH_COP)]);
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact value of the fixed-time game: can m cops, placing with the
/// robber's start in view, force a coincidence immediately after cop turn
/// T? Backward induction over the T-level game tree. Unbounded boards are
/// clipped to the window either side can reach in T turns.
pub fn fixed_time_value(
    board: &BoardKind,
    m: usize,
    t: u64,
    robber_start: &Coord,
    speed: i64,
    budget: SolveBudget,
) -> Result<bool> {
    if t == 0 {
        return Err(Error::config("fixed-time game needs t >= 1"));
    }
    let arena = match board {
        BoardKind::Tunnel { .. } => {
            let radius = (3 * t as i64) + 2 * speed * t as i64;
            let cells = board_window(board, robber_start[0] - radius, robber_start[0] + radius);
            Arena::from_cells(board, cells, speed)?
        }
        _ => Arena::new(board, speed)?,
    };
    check_budget(arena.len(), m, t, budget)?;
    let ms = MultisetSpace::build(&arena, m);
    let v = arena.len();
    let start = arena
        .cells
        .iter()
        .position(|c| c == robber_start)
        .ok_or_else(|| Error::config("robber start is off the board"))? as u32;

    // layer[k][(mi, r)] = cops about to take turn k+1..T win, robber at r
    // having already moved k times. Build from the last turn backwards.
    let mut next: Vec<bool> = Vec::new();
    for turn in (1..=t).rev() {
        let mut cur = vec![false; ms.sets.len() * v];
        for mi in 0..ms.sets.len() as u32 {
            for r in 0..v as u32 {
                let value = if turn == t {
                    ms.trans[mi as usize]
                        .iter()
                        .any(|&mj| ms.contains_cell(mj, r))
                } else {
                    ms.trans[mi as usize].iter().any(|&mj| {
                        arena.robber_moves[r as usize]
                            .iter()
                            .all(|&r2| next[mj as usize * v + r2 as usize])
                    })
                };
                cur[mi as usize * v + r as usize] = value;
            }
        }
        next = cur;
    }

    Ok((0..ms.sets.len()).any(|mi| next[mi * v + start as usize]))
}

fn board_window(board: &BoardKind, lo: i64, hi: i64) -> Vec<Coord> {
    // Cells of a tunnel with the unbounded axis restricted to [lo, hi].
    let mut out = Vec::new();
    let n = board.n();
    let mut p = vec![0i64; board.axes()];
    fn rec(out: &mut Vec<Coord>, p: &mut Vec<i64>, axis: usize, lo: i64, hi: i64, n: i64) {
        if axis == p.len() {
            out.push(Coord::from(p.as_slice()));
            return;
        }
        let (a, b) = if axis == 0 { (lo, hi) } else { (1, n) };
        for x in a..=b {
            p[axis] = x;
            rec(out, p, axis + 1, lo, hi, n);
        }
    }
    rec(&mut out, &mut p, 0, lo, hi, n);
    out
}

/// Least cop count (up to m_max) winning the given variant, or None.
pub fn min_cops(
    board: &BoardKind,
    variant: &GameVariant,
    m_max: usize,
    speed: i64,
    rules: CoverRules,
    budget: SolveBudget,
) -> Result<Option<usize>> {
    for m in 0..=m_max {
        let win = match variant {
            GameVariant::Covering { .. } => cops_can_cover(board, m, speed, rules, budget)?,
            GameVariant::Capture { .. } => cops_can_catch(board, m, speed, budget)?,
            GameVariant::FixedTime { t } => {
                fixed_time_value(board, m, *t, &board.center(), speed, budget)?
            }
            GameVariant::Rugby { .. } => {
                return Err(Error::Unsupported(
                    "exact solving of the rugby game (unbounded board)".into(),
                ))
            }
        };
        if win {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Can m cops keep a committed robber walk covered at every cop turn?
///
/// The robber's whole trajectory is fixed in advance (he parks on the last
/// cell forever), so the cops' side collapses to a reachability sweep over
/// cop multisets: which multisets can be standing on the robber's current
/// cell at each successive cop turn. Returning false is a proof that the
/// trajectory beats every possible m-cop controller, which is exactly what
/// the diagonal sprint lower bound claims.
pub fn fixed_trajectory_coverable(
    board: &BoardKind,
    m: usize,
    trajectory: &[Coord],
    budget: SolveBudget,
) -> Result<bool> {
    if trajectory.is_empty() {
        return Err(Error::invalid("empty trajectory"));
    }
    let arena = Arena::new(board, 0)?;
    check_budget(arena.len(), m, trajectory.len() as u64 + 1, budget)?;
    let ms = MultisetSpace::build(&arena, m);
    let cell = |c: &Coord| -> Result<u32> {
        arena
            .cells
            .iter()
            .position(|q| q == c)
            .map(|i| i as u32)
            .ok_or_else(|| Error::invalid(format!("trajectory cell {c} is off the board")))
    };

    // Cop turn k (1-based) must cover trajectory[k-1]; the walk then stops,
    // so one extra turn on the final cell settles the infinite tail.
    let mut alive: Vec<bool> = vec![true; ms.sets.len()];
    for k in 0..=trajectory.len() {
        let target = cell(&trajectory[k.min(trajectory.len() - 1)])?;
        let mut next = vec![false; ms.sets.len()];
        let mut any = false;
        for mi in 0..ms.sets.len() {
            if !alive[mi] {
                continue;
            }
            for &mj in &ms.trans[mi] {
                if ms.contains_cell(mj, target) {
                    next[mj as usize] = true;
                    any = true;
                }
            }
        }
        if !any {
            return Ok(false);
        }
        alive = next;
    }
    Ok(true)
}

/// Robber that plays the solved covering game perfectly: placement picks a
/// start outside the cops' winning set when one exists, and every turn
/// takes an escaping move the moment the cops' play leaves one open.
pub struct OracleRobber {
    solve: Arc<CoveringSolve>,
}

impl OracleRobber {
    pub fn new(solve: Arc<CoveringSolve>) -> Self {
        OracleRobber { solve }
    }

    fn cell_index(&self, c: &Coord) -> Result<u32> {
        self.solve
            .arena
            .cells
            .iter()
            .position(|q| q == c)
            .map(|i| i as u32)
            .ok_or_else(|| Error::invalid(format!("cell {c} not in the solved arena")))
    }

    fn multiset_index(&self, cops: &[Coord]) -> Result<u32> {
        let mut cells = cops
            .iter()
            .map(|c| self.cell_index(c))
            .collect::<Result<Vec<u32>>>()?;
        cells.sort_unstable();
        self.solve
            .ms
            .index
            .get(&cells)
            .copied()
            .ok_or_else(|| Error::invalid("cop multiset not in the solved space"))
    }
}

impl RobberController for OracleRobber {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn place(&mut self, spec: &MatchSpec, cops: &[Coord]) -> Result<Coord> {
        if spec.board != self.solve.board || spec.robber_speed != self.solve.speed {
            return Err(Error::config("oracle robber solved a different instance"));
        }
        let mi = self.multiset_index(cops)?;
        for r in 0..self.solve.arena.len() as u32 {
            if !self.solve.placement_beats(mi, r) {
                return Ok(self.solve.arena.cells[r as usize].clone());
            }
        }
        // Lost position: any start will do.
        Ok(self.solve.arena.cells[0].clone())
    }

    fn turn(&mut self, _spec: &MatchSpec, state: &GameState) -> Result<Coord> {
        let mi = self.multiset_index(&state.cops)?;
        let r = self.cell_index(&state.robber)?;
        for &r2 in &self.solve.arena.robber_moves[r as usize] {
            let breaks_check = self.solve.rules.cover_after_robber
                && !self.solve.ms.contains_cell(mi, r2);
            let escapes = !self.solve.win[self.solve.idx(mi, r2, PH_COP)];
            if breaks_check || escapes {
                return Ok(self.solve.arena.cells[r2 as usize].clone());
            }
        }
        Ok(state.robber.clone())
    }
}

/// One solved instance, as written to the regression file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolveRecord {
    pub board: BoardKind,
    pub game: String,
    pub robber_speed: i64,
    pub m_max: usize,
    pub min_cops: Option<usize>,
}

/// Solve the standard regression instances. Results get frozen into a JSON
/// file checked into the repo; the acceptance suite recomputes and compares.
pub fn regression_instances() -> Vec<(BoardKind, GameVariant, usize, i64)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push((
            BoardKind::Grid { n, d: 1 },
            GameVariant::Covering { horizon: 0 },
            (n as usize).div_ceil(2) + 1,
            2,
        ));
    }
    for n in 2..=3 {
        out.push((
            BoardKind::Grid { n, d: 2 },
            GameVariant::Covering { horizon: 0 },
            4,
            2,
        ));
        out.push((
            BoardKind::Torus { n, d: 2 },
            GameVariant::Covering { horizon: 0 },
            4,
            2,
        ));
        out.push((
            BoardKind::Torus { n, d: 1 },
            GameVariant::Covering { horizon: 0 },
            3,
            2,
        ));
    }
    for n in [3, 5] {
        out.push((
            BoardKind::Grid { n, d: 1 },
            GameVariant::Capture { horizon: 0 },
            2,
            2,
        ));
    }
    // The straight line, as a tunnel one cell tall. Larger m_max at t = 4
    // would blow the default budget (the window grows with t), so the last
    // record freezes a lower-bound fact rather than the exact value.
    for (t, m_max) in [(1, 1), (2, 2), (3, 3), (4, 2)] {
        out.push((
            BoardKind::Tunnel { n: 1, d: 1 },
            GameVariant::FixedTime { t },
            m_max,
            2,
        ));
    }
    out
}

pub fn run_regressions(budget: SolveBudget) -> Result<Vec<SolveRecord>> {
    regression_instances()
        .into_iter()
        .map(|(board, variant, m_max, speed)| {
            let min = min_cops(&board, &variant, m_max, speed, CoverRules::default(), budget)?;
            Ok(SolveRecord {
                board,
                game: match variant {
                    GameVariant::Covering { .. } => "covering".into(),
                    GameVariant::Capture { .. } => "capture".into(),
                    GameVariant::FixedTime { t } => format!("fixed_time_{t}"),
                    GameVariant::Rugby { .. } => "rugby".into(),
                },
                robber_speed: speed,
                m_max,
                min_cops: min,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord;

    fn b() -> SolveBudget {
        SolveBudget::default()
    }

    #[test]
    fn path_covering_number_matches_the_formula() {
        for n in 1..=6 {
            let board = BoardKind::Grid { n, d: 1 };
            let variant = GameVariant::Covering { horizon: 0 };
            let got = min_cops(&board, &variant, 5, 2, CoverRules::default(), b()).unwrap();
            assert_eq!(got, Some((n as usize).div_ceil(2)), "n = {n}");
        }
    }

    #[test]
    fn single_cell_and_tiny_square() {
        assert!(cops_can_cover(
            &BoardKind::Grid { n: 1, d: 1 },
            1,
            2,
            CoverRules::default(),
            b()
        )
        .unwrap());
        // Diameter-1 board: one cop jumps onto the robber every turn.
        assert!(cops_can_cover(
            &BoardKind::Grid { n: 2, d: 2 },
            1,
            2,
            CoverRules::default(),
            b()
        )
        .unwrap());
        assert!(!cops_can_cover(
            &BoardKind::Grid { n: 2, d: 2 },
            0,
            2,
            CoverRules::default(),
            b()
        )
        .unwrap());
    }

    #[test]
    fn wrapped_three_torus_is_diameter_one() {
        // Every pair of cells on Torus(3,2) is adjacent, so one cop covers.
        let board = BoardKind::Torus { n: 3, d: 2 };
        let variant = GameVariant::Covering { horizon: 0 };
        let got = min_cops(&board, &variant, 2, 2, CoverRules::default(), b()).unwrap();
        assert_eq!(got, Some(1));
    }

    #[test]
    fn extra_checks_only_hurt_the_cops() {
        let board = BoardKind::Grid { n: 4, d: 1 };
        let plain = CoverRules::default();
        let strict = CoverRules {
            cover_at_start: true,
            cover_after_robber: true,
        };
        for m in 0..=3 {
            let a = cops_can_cover(&board, m, 2, plain, b()).unwrap();
            let s = cops_can_cover(&board, m, 2, strict, b()).unwrap();
            assert!(a || !s, "stricter checks cannot help the cops at m = {m}");
        }
        // With checks after robber moves a speed-2 robber steps off any
        // single guard, so the path needs every vertex guarded less one.
        assert!(cops_can_cover(&board, 4, 2, strict, b()).unwrap());
    }

    #[test]
    fn monotone_in_cop_count() {
        let board = BoardKind::Grid { n: 3, d: 2 };
        let mut prev = false;
        for m in 0..=4 {
            let win = cops_can_cover(&board, m, 2, CoverRules::default(), b()).unwrap();
            assert!(!prev || win, "cop win must be monotone in m");
            prev = win;
        }
    }

    #[test]
    fn safety_operator_fixed_point() {
        let solve = solve_covering(
            &BoardKind::Grid { n: 4, d: 1 },
            2,
            2,
            CoverRules::default(),
            b(),
        )
        .unwrap();
        assert!(solve.is_fixed_point());
        assert!(solve.cops_win());
        assert!(solve.winning_placement().is_some());
    }

    #[test]
    fn symmetry_reduction_agrees_with_plain_solve() {
        let cases = [
            (BoardKind::Grid { n: 4, d: 1 }, 2),
            (BoardKind::Grid { n: 3, d: 1 }, 1),
            (BoardKind::Grid { n: 3, d: 2 }, 2),
            (BoardKind::Torus { n: 3, d: 1 }, 1),
        ];
        for (board, m) in cases {
            for rules in [
                CoverRules::default(),
                CoverRules {
                    cover_at_start: true,
                    cover_after_robber: false,
                },
            ] {
                let plain = cops_can_cover(&board, m, 2, rules, b()).unwrap();
                let sym = cops_can_cover_symmetric(&board, m, 2, rules, b()).unwrap();
                assert_eq!(plain, sym, "board {board:?} m {m} rules {rules:?}");
            }
        }
    }

    #[test]
    fn capture_on_small_paths() {
        // One cop corners even a speed-2 robber on a path: jumps over the
        // cop land next to it and get caught on the rebound.
        assert!(cops_can_catch(&BoardKind::Grid { n: 5, d: 1 }, 1, 2, b()).unwrap());
        assert!(!cops_can_catch(&BoardKind::Grid { n: 5, d: 1 }, 0, 2, b()).unwrap());
    }

    #[test]
    fn fixed_time_tiny_values() {
        let tunnel = BoardKind::Tunnel { n: 1, d: 1 };
        let origin = coord![0, 1];
        // T=1: a cop placed on the known start is still there after its
        // first move, before the robber ever gets to move.
        assert!(fixed_time_value(&tunnel, 1, 1, &origin, 2, b()).unwrap());
        // T=3 vs one cop: the speed-2 robber escapes; the quadrant walk
        // lower bound at its smallest scale.
        assert!(!fixed_time_value(&tunnel, 1, 3, &origin, 2, b()).unwrap());
        // Two cops bracketing the start can land on any cell the robber
        // reaches by turn 2.
        assert!(fixed_time_value(&tunnel, 2, 2, &origin, 2, b()).unwrap());
        assert!(!fixed_time_value(&tunnel, 1, 2, &origin, 2, b()).unwrap());
    }

    #[test]
    fn sprint_trajectory_beats_undersized_teams() {
        // Grid(5,1): two cops cannot track the start-at-1, +2 walk, three
        // can (they simply stand on every odd cell).
        let board = BoardKind::Grid { n: 5, d: 1 };
        let walk = vec![coord![1], coord![3], coord![5]];
        assert!(!fixed_trajectory_coverable(&board, 2, &walk, b()).unwrap());
        assert!(fixed_trajectory_coverable(&board, 3, &walk, b()).unwrap());
    }

    #[test]
    fn oracle_robber_beats_undersized_guard() {
        use crate::engine::{play, NullObserver, Outcome, WinReason};

        let board = BoardKind::Grid { n: 5, d: 1 };
        let solve = Arc::new(
            solve_covering(&board, 2, 2, CoverRules::default(), b()).unwrap(),
        );
        assert!(!solve.cops_win());
        let spec = MatchSpec {
            board,
            variant: GameVariant::Covering { horizon: 50 },
            cop_count: 2,
            robber_speed: 2,
            seed: 0,
            cover_at_start: false,
            cover_after_robber: false,
        };
        let mut cops = crate::cops::GreedyChaser;
        let mut robber = OracleRobber::new(solve);
        let res = play(&spec, &mut cops, &mut robber, &mut NullObserver).unwrap();
        assert!(
            matches!(
                res.outcome,
                Outcome::RobberWins {
                    reason: WinReason::CoverageBroken,
                    ..
                }
            ),
            "got {:?}",
            res.outcome
        );
    }

    #[test]
    fn budget_refuses_oversized_instances() {
        let board = BoardKind::Grid { n: 6, d: 2 };
        let tight = SolveBudget { max_states: 1000 };
        let err = cops_can_cover(&board, 4, 2, CoverRules::default(), tight).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
        assert!(err.to_string().contains("budget"));
    }
}
