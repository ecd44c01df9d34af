use std::time::Instant;

use super::dimstop::dim_stop_solver;
use super::{Algorithm, BoundaryBox, CbPolicy, PavingResult, SolveOptions, SolveStats, SplitPolicy, WaitList};
use crate::contract::{Contractor, Feasibility};
use crate::evr::combine;
use crate::interval::IntervalBox;
use crate::model::{ConstraintSet, Ncsp};
use crate::split::{active_mask, bs, ds, splittable_mask, Splitter};

/// Complementary boxes remembered for running constraints, by id.
type Memo = Vec<(usize, IntervalBox)>;

struct Node {
    bx: IntervalBox,
    running: ConstraintSet,
    memo: Memo,
}

pub(super) struct Engine<'a> {
    ncsp: &'a Ncsp,
    opts: &'a SolveOptions,
    ctr: Contractor<'a>,
    wait: WaitList<Node>,
    inner: Vec<IntervalBox>,
    boundary: Vec<BoundaryBox>,
    ds_splits: u64,
    bs_splits: u64,
    nodes: u64,
}

fn memo_get(memo: &Memo, id: usize) -> Option<&IntervalBox> {
    memo.iter().find(|(c, _)| *c == id).map(|(_, b)| b)
}

impl<'a> Engine<'a> {
    pub(super) fn new(ncsp: &'a Ncsp, opts: &'a SolveOptions) -> Engine<'a> {
        Engine {
            ncsp,
            opts,
            ctr: Contractor::new(ncsp, opts.contractor),
            wait: WaitList::new(opts.order),
            inner: Vec::new(),
            boundary: Vec::new(),
            ds_splits: 0,
            bs_splits: 0,
            nodes: 0,
        }
    }

    fn eps(&self) -> &'a [f64] {
        &self.opts.eps
    }

    fn restricted(&self) -> bool {
        self.opts.algorithm == Algorithm::Uca6Plus
    }

    pub(super) fn run(mut self) -> PavingResult {
        let start = Instant::now();
        let b0 = self.ncsp.domain();
        let c0 = self.ncsp.all_constraints();
        let uca = self.opts.algorithm.is_uca();
        if c0.is_empty() {
            self.inner.push(b0);
        } else if uca {
            self.prune_check_uca(&b0, c0, Vec::new());
        } else {
            self.prune_check_dmbc(&b0);
        }
        while let Some(node) = self.wait.get_next() {
            self.nodes += 1;
            if uca {
                self.split_uca(node);
            } else {
                self.split_dmbc(node);
            }
        }
        let (dr_calls, cb_calls) = self.ctr.counts();
        let mut stats = SolveStats {
            dr_calls,
            cb_calls,
            ds_splits: self.ds_splits,
            bs_splits: self.bs_splits,
            nodes: self.nodes,
            peak_waitlist: self.wait.peak(),
            ..Default::default()
        };
        stats.set_volumes(&self.inner, &self.boundary);
        stats.wall_time_s = start.elapsed().as_secs_f64();
        PavingResult {
            problem: self.ncsp.name().to_string(),
            var_names: self.ncsp.var_names().iter().map(|s| s.to_string()).collect(),
            eps: self.opts.eps.clone(),
            algorithm: self.opts.algorithm,
            inner: self.inner,
            boundary: self.boundary,
            stats,
        }
    }

    fn check_epsilon(&mut self, b: IntervalBox, set: ConstraintSet) {
        match self.ctr.fc(&b, set) {
            Feasibility::Feasible => self.inner.push(b),
            Feasibility::Unknown => {
                let cells = vec![1; b.dim()];
                self.boundary.push(BoundaryBox { bx: b, running: set, cells });
            }
            Feasibility::Infeasible => {}
        }
    }

    fn prune_check_dmbc(&mut self, b: &IntervalBox) {
        let all = self.ncsp.all_constraints();
        let b = self.ctr.dr(b, all, None);
        if b.is_empty() {
            return;
        }
        if !splittable_mask(&b, self.eps()).contains(&true) {
            self.check_epsilon(b, all);
            return;
        }
        if self.opts.algorithm == Algorithm::DmbcPlus && self.ctr.fc_feasible(&b, all) == Feasibility::Feasible {
            self.inner.push(b);
            return;
        }
        self.wait.put(Node { bx: b, running: all, memo: Vec::new() });
    }

    fn split_dmbc(&mut self, node: Node) {
        let mask = splittable_mask(&node.bx, self.eps());
        let (l, r) = ds(&node.bx, &mask).expect("queued boxes are splittable");
        self.ds_splits += 1;
        self.prune_check_dmbc(&l);
        self.prune_check_dmbc(&r);
    }

    fn prune_check_uca(&mut self, b: &IntervalBox, set: ConstraintSet, memo: Memo) {
        let restricted = self.restricted();
        let mask = restricted.then(|| active_mask(self.ncsp, b, set, self.eps()));
        let b = self.ctr.dr(b, set, mask.as_deref());
        if b.is_empty() {
            return;
        }
        let active = active_mask(self.ncsp, &b, set, self.eps());
        let n_active = active.iter().filter(|&&a| a).count();
        if n_active == 0 {
            self.check_epsilon(b, set);
            return;
        }
        if restricted && n_active <= self.opts.d_stop {
            self.dim_stop(&b, set, &active);
            return;
        }
        let memo = if restricted {
            memo.into_iter().filter(|(_, cb)| !b.subset_of(cb)).map(|(c, cb)| (c, cb.intersect(&b))).collect()
        } else {
            memo
        };
        self.wait.put(Node { bx: b, running: set, memo });
    }

    fn dim_stop(&mut self, b: &IntervalBox, set: ConstraintSet, active: &[bool]) {
        let out = dim_stop_solver(&self.ctr, b, set, self.eps(), active);
        let dims: Vec<usize> = (0..b.dim()).filter(|&i| active[i]).collect();
        let inner = combine(&out.inner, &dims).unwrap_or_else(|_| out.inner.clone());
        let boundary = combine(&out.boundary, &dims).unwrap_or_else(|_| out.boundary.clone());
        self.inner.extend(inner);
        for bx in boundary {
            let cells = out.cell_counts(&bx);
            self.boundary.push(BoundaryBox { bx, running: set, cells });
        }
    }

    /// Complementary boxes for the UCA split step. Constraints whose box is
    /// empty are removed from `set`; the rest are returned as pivot
    /// candidates in id order.
    fn complementary_boxes(&self, b: &IntervalBox, set: &mut ConstraintSet, memo: &Memo) -> Memo {
        let ncsp = self.ncsp;
        let mut cbs = Vec::new();
        match self.opts.algorithm {
            Algorithm::Uca5 => {
                for c in set.iter() {
                    if ncsp.constraint(c).is_equality() {
                        continue;
                    }
                    let cb = self.ctr.cb_one(b, c, None);
                    if cb.is_empty() {
                        set.remove(c);
                    } else if cb != *b {
                        cbs.push((c, cb));
                        break;
                    }
                }
            }
            Algorithm::Uca6 => {
                for c in set.iter() {
                    if ncsp.constraint(c).is_equality() {
                        continue;
                    }
                    let seed = memo_get(memo, c).map_or_else(|| b.clone(), |m| b.intersect(m));
                    let cb = self.ctr.cb_one(&seed, c, None);
                    if cb.is_empty() {
                        set.remove(c);
                    } else {
                        cbs.push((c, cb));
                    }
                }
            }
            Algorithm::Uca6Plus => {
                let mask = active_mask(ncsp, b, *set, self.eps());
                let mut fresh = ConstraintSet::empty();
                let limit = match self.opts.cb_policy {
                    CbPolicy::All => usize::MAX,
                    CbPolicy::FirstK(k) => k,
                };
                for c in set.iter().filter(|&c| !ncsp.constraint(c).is_equality()).take(limit) {
                    fresh.insert(c);
                }
                let mut candidates = fresh;
                for (c, _) in memo {
                    candidates.insert(*c);
                }
                for c in candidates.iter() {
                    let cb = match (memo_get(memo, c), fresh.contains(c)) {
                        (Some(m), true) => self.ctr.cb_one(&b.intersect(m), c, Some(&mask)),
                        (None, _) => self.ctr.cb_one(b, c, Some(&mask)),
                        (Some(m), false) => b.intersect(m),
                    };
                    if cb.is_empty() {
                        set.remove(c);
                    } else if cb != *b {
                        cbs.push((c, cb));
                    }
                }
            }
            Algorithm::Dmbc | Algorithm::DmbcPlus => unreachable!("not a UCA algorithm"),
        }
        cbs
    }

    fn split_uca(&mut self, node: Node) {
        let Node { bx: b, running: mut set, memo } = node;
        let cbs = self.complementary_boxes(&b, &mut set, &memo);
        if set.is_empty() {
            self.inner.push(b);
            return;
        }
        let pivot = match self.opts.algorithm {
            Algorithm::Uca5 => cbs.first(),
            // Smallest volume, ties to the lowest id.
            _ => cbs.iter().reduce(|best, c| if c.1.volume() < best.1.volume() { c } else { best }),
        };
        let active = active_mask(self.ncsp, &b, set, self.eps());
        let mut split = None;
        if self.opts.split == SplitPolicy::BsDs {
            if let Some((c, cb)) = pivot {
                split = bs(&b, cb, self.opts.frag_ratio, &active).map(|o| (o.splitter, o.parts, Some(*c)));
            }
        }
        if split.is_none() {
            split = ds(&b, &active).map(|(l, r)| (Splitter::Ds, vec![l, r], None));
        }
        let Some((splitter, parts, pivot_id)) = split else {
            // Removing constraints left nothing to split.
            self.check_epsilon(b, set);
            return;
        };
        match splitter {
            Splitter::Ds => self.ds_splits += 1,
            Splitter::Bs => self.bs_splits += 1,
        }
        let memo = if self.opts.memo && self.opts.algorithm != Algorithm::Uca5 { cbs } else { Vec::new() };
        for (i, part) in parts.into_iter().enumerate() {
            let mut child_set = set;
            let mut child_memo = memo.clone();
            if i > 0 {
                if let Some(p) = pivot_id {
                    child_set.remove(p);
                    child_memo.retain(|(c, _)| *c != p);
                    if child_set.is_empty() {
                        self.inner.push(part);
                        continue;
                    }
                }
            }
            if self.restricted() {
                child_memo.retain(|(_, cb)| !part.subset_of(cb));
                for (_, cb) in &mut child_memo {
                    *cb = cb.intersect(&part);
                }
            }
            self.prune_check_uca(&part, child_set, child_memo);
        }
    }
}
