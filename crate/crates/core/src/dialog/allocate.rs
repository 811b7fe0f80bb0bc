//! Assigning content sentences to the two speakers.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::personality::{clamp_ratio, Speaker};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationPlan {
    pub speakers: Vec<Speaker>,
}

impl AllocationPlan {
    pub fn count(&self, s: Speaker) -> usize {
        self.speakers.iter().filter(|x| **x == s).count()
    }

    /// Number of speaker changes plus one; zero for an empty plan.
    pub fn turns(&self) -> usize {
        if self.speakers.is_empty() {
            return 0;
        }
        1 + self.speakers.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Whether sentence `i` ends its speaker's run.
    pub fn ends_run(&self, i: usize) -> bool {
        match (self.speakers.get(i), self.speakers.get(i + 1)) {
            (Some(a), Some(b)) => a != b,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

/// Sentences S1 should receive out of `n` at `ratio`: rounded, and at least
/// one per speaker when there are two or more sentences. A lone sentence
/// goes to S1.
pub fn quota(n: usize, ratio: f64) -> usize {
    let q = (clamp_ratio(ratio) * n as f64 + 0.5) as usize;
    match n {
        0 => 0,
        1 => 1,
        _ => q.clamp(1, n - 1),
    }
}

/// Assigns `n` sentences. S1 opens; a speaker keeps the floor for at most
/// `chunk` consecutive sentences unless the other has used up its quota.
/// The speaker further behind its running target speaks next; near ties
/// are broken by `rng`, which is advanced exactly once per sentence.
pub fn allocate<R: Rng + ?Sized>(n: usize, ratio: f64, chunk: usize, rng: &mut R) -> AllocationPlan {
    let r = clamp_ratio(ratio);
    let chunk = chunk.max(1);
    let totals = [quota(n, r), n - quota(n, r)];
    let shares = [r, 1.0 - r];
    let mut counts = [0usize; 2];
    let mut run = 0usize;
    let mut speakers: Vec<Speaker> = Vec::with_capacity(n);
    for i in 0..n {
        let u: f64 = rng.gen();
        let last = speakers.last().copied();
        let open = |s: Speaker| counts[s.index()] < totals[s.index()];
        let pick = if i == 0 {
            if open(Speaker::S1) {
                Speaker::S1
            } else {
                Speaker::S2
            }
        } else {
            let cur = last.expect("not the first sentence");
            let other = cur.other();
            if !open(cur) {
                other
            } else if !open(other) {
                cur
            } else if run >= chunk {
                other
            } else {
                let deficit =
                    |s: Speaker| shares[s.index()] * (i + 1) as f64 - counts[s.index()] as f64;
                let (dc, do_) = (deficit(cur), deficit(other));
                if (dc - do_).abs() < 0.5 {
                    if u < shares[cur.index()] {
                        cur
                    } else {
                        other
                    }
                } else if dc > do_ {
                    cur
                } else {
                    other
                }
            }
        };
        run = if Some(pick) == last { run + 1 } else { 1 };
        counts[pick.index()] += 1;
        speakers.push(pick);
    }
    AllocationPlan { speakers }
}
