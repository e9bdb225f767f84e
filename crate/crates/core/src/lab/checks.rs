//! The check procedures behind each registered claim.

use std::fmt::Display;
use std::time::Instant;

use super::{Claim, ClaimKind, Counterexample};
use crate::closed_forms::{
    classify_leader_even_m, classify_leader_odd_m, delta_ladder, even_m_shape, ia1_partition, ia1_span,
    ia2_partition, ia2_span, partition::tiles, seq_compare, shift_f, shift_h, sign_sequence, DeltaLadder,
    Interval, Verdict,
};
use crate::cyclotomic::{coset_size, is_coset_leader, largest_leaders, leaders_with_sizes};
use crate::dimensions::{is_lcd, ClosedFormRows, DefiningSetSpec, LeaderProfile};
use crate::error::Error;
use crate::params::CodeParams;

/// `2^{r-1}` shifts of length `2^{r-1}` each; beyond this a cell is skipped.
const MAX_CELL_SIGN_RANK: u32 = 16;

pub(crate) enum Abort {
    Budget(String),
    Error(Error),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } | Error::ModulusTooWide(_) => Abort::Budget(e.to_string()),
            other => Abort::Error(other),
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Finding {
    pub counterexamples: Vec<Counterexample>,
    pub note: Option<String>,
}

pub(crate) type CheckResult = Result<Finding, Abort>;

/// Per-`(q, m)` state shared by the claims run on that cell.
pub(crate) struct Cell {
    params: CodeParams,
    deadline: Option<Instant>,
    ladder: Option<DeltaLadder>,
    top: Vec<u128>,
    // Leaders up to `profile_hi`.
    profile: Option<(u128, LeaderProfile)>,
}

impl Cell {
    pub fn new(params: &CodeParams) -> Self {
        Cell {
            params: params.clone(),
            deadline: None,
            ladder: None,
            top: Vec::new(),
            profile: None,
        }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    fn tick(&self, i: u128) -> Result<(), Abort> {
        if i.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Abort::Budget("cell time budget exhausted".into()));
                }
            }
        }
        Ok(())
    }

    fn q(&self) -> u128 {
        self.params.q() as u128
    }

    fn m(&self) -> u32 {
        self.params.m()
    }

    fn n(&self) -> Result<u128, Abort> {
        Ok(self.params.n_native()?)
    }

    fn ladder(&mut self) -> Result<&DeltaLadder, Abort> {
        if self.ladder.is_none() {
            self.ladder = Some(delta_ladder(&self.params)?);
        }
        Ok(self.ladder.as_ref().expect("just set"))
    }

    fn ladder_values(&mut self) -> Result<Vec<u128>, Abort> {
        self.ladder()?
            .values()
            .ok_or_else(|| Abort::Budget("ladder value beyond 128 bits".into()))
    }

    /// The `k` largest leaders, padded with 0 (the leader of `C_0`) when
    /// fewer nonzero cosets exist.
    fn top(&mut self, k: usize) -> Result<Vec<u128>, Abort> {
        if self.top.len() < k {
            self.top = largest_leaders(&self.params, k.max(6))?;
        }
        let mut out: Vec<u128> = self.top.iter().copied().take(k).collect();
        out.resize(k, 0);
        Ok(out)
    }

    /// Leaders in `[1, hi]`, capped at `n/2` (no leader lies above it).
    fn profile(&mut self, hi: u128) -> Result<&LeaderProfile, Abort> {
        let hi = hi.min(self.n()? / 2).max(1);
        if self.profile.as_ref().is_none_or(|(h, _)| *h < hi) {
            self.profile = Some((hi, LeaderProfile::build(&self.params, hi)?));
        }
        Ok(&self.profile.as_ref().expect("just set").1)
    }

    fn cx(&self, witness: u128, expected: impl Display, observed: impl Display) -> Counterexample {
        Counterexample {
            q: self.params.q(),
            m: self.m(),
            witness,
            expected: expected.to_string(),
            observed: observed.to_string(),
        }
    }
}

fn odd_m_at_least(p: &CodeParams, lo: u32) -> bool {
    p.m_is_odd() && p.m() >= lo && p.q() >= 3
}

fn even_m_at_least(p: &CodeParams, lo: u32) -> bool {
    !p.m_is_odd() && p.m() >= lo && p.q() >= 3
}

macro_rules! claim {
    ($id:literal, $kind:ident, $stmt:literal, $applies:expr, $check:expr) => {
        Claim {
            id: $id,
            kind: ClaimKind::$kind,
            statement: $stmt,
            applies: $applies,
            check: $check,
        }
    };
}

pub(crate) static REGISTRY: &[Claim] = &[
    claim!("C20", Conjecture, "odd q, even m: δ3 and δ4 are the third and fourth largest coset leaders",
        |p| even_m_at_least(p, 2) && p.q_is_odd(), |c| ranks_conjecture(c, &[3, 4])),
    claim!("C25", Conjecture, "even q, even m: δ2 and δ3 are the second and third largest coset leaders",
        |p| even_m_at_least(p, 2) && !p.q_is_odd(), |c| ranks_conjecture(c, &[2, 3])),
    claim!("IA1", Lemma, "IA-1 partitions I^(t) into 2^(t-2) contiguous intervals",
        |p| odd_m_at_least(p, 5) && p.q_is_odd(), |c| partition_check(c, true)),
    claim!("IA2", Lemma, "IA-2 partitions J^(t) into 2^(t-2) contiguous intervals",
        |p| odd_m_at_least(p, 5) && !p.q_is_odd(), |c| partition_check(c, false)),
    claim!("L11", Lemma, "odd q, odd m: |C_δ1| = 1, |C_δ2| = 2, |C_δi| = 2m for i = 3..6",
        |p| odd_m_at_least(p, 3) && p.q_is_odd(), ladder_sizes),
    claim!("L13", Lemma, "even q, odd m: δ1..δ5 are coset leaders",
        |p| odd_m_at_least(p, 5) && !p.q_is_odd(), ladder_are_leaders),
    claim!("L14", Lemma, "even q, odd m: no x in δ2 + J^(t) is a coset leader",
        |p| odd_m_at_least(p, 5) && !p.q_is_odd(), |c| gap_non_leaders(c, 2)),
    claim!("L15", Lemma, "even q, odd m: the only coset leader above δ2 is δ1",
        |p| odd_m_at_least(p, 5) && !p.q_is_odd(), |c| nothing_above(c, 2)),
    claim!("L17", Lemma, "even q, odd m: |C_δi| = 2m for i = 2..5, except |C_δ5| = 2 for m = 5",
        |p| odd_m_at_least(p, 3) && !p.q_is_odd(), ladder_sizes),
    claim!("L2", Lemma, "odd m: |C_x| = 2m for q ∤ x ≤ 2q^(t+1) - 2q - 1",
        |p| odd_m_at_least(p, 5), small_coset_sizes),
    claim!("L21", Lemma, "every k-left-shift F and H of S^r compares ≥ S^r",
        |p| even_m_at_least(p, 4), shift_dominance),
    claim!("L22", Lemma, "odd q, even m: |C_δ1| = 1 and |C_δ2| = 2^r (or 2m when m is a power of 2)",
        |p| even_m_at_least(p, 2) && p.q_is_odd(), ladder_sizes),
    claim!("L5", Lemma, "even m: |C_x| = 2m for q ∤ x ≤ 2q^t - 2",
        |p| even_m_at_least(p, 4), small_coset_sizes),
    claim!("L7", Lemma, "odd q, odd m: δ1..δ6 are coset leaders",
        |p| odd_m_at_least(p, 5) && p.q_is_odd(), ladder_are_leaders),
    claim!("L8", Lemma, "odd q, odd m: no x in δ3 + I^(t) is a coset leader",
        |p| odd_m_at_least(p, 5) && p.q_is_odd(), |c| gap_non_leaders(c, 3)),
    claim!("L9", Lemma, "odd q, odd m: the only coset leaders above δ3 are δ1 and δ2",
        |p| odd_m_at_least(p, 5) && p.q_is_odd(), |c| nothing_above(c, 3)),
    claim!("LCD", Theorem, "every defining set is closed under x ↦ n - x",
        |_| true, lcd_check),
    claim!("T1", Theorem, "odd m: leader classification of q ∤ x ≤ 2q^(t+1) + 2q - 1",
        |p| odd_m_at_least(p, 5), classifier_check),
    claim!("T10", Theorem, "odd q, odd m: δ1..δ6 are the six largest coset leaders",
        |p| odd_m_at_least(p, 3) && p.q_is_odd(), |c| ladder_is_top(c, 6)),
    claim!("T12", Theorem, "odd q, odd m: dimensions for δ beyond δ6",
        |p| odd_m_at_least(p, 3) && p.q_is_odd(), |c| closed_forms(c, "T12")),
    claim!("T16", Theorem, "even q, odd m: δ1..δ5 are the five largest coset leaders",
        |p| odd_m_at_least(p, 3) && !p.q_is_odd(), |c| ladder_is_top(c, 5)),
    claim!("T18", Theorem, "even q, odd m: dimensions for δ beyond δ5",
        |p| odd_m_at_least(p, 3) && !p.q_is_odd(), |c| closed_forms(c, "T18")),
    claim!("T19", Theorem, "odd q, even m: δ1 and δ2 are the two largest coset leaders",
        |p| even_m_at_least(p, 2) && p.q_is_odd(), |c| ladder_is_top(c, 2)),
    claim!("T23", Theorem, "odd q, even m: dimensions for δ ≥ δ2",
        |p| even_m_at_least(p, 2) && p.q_is_odd(), |c| closed_forms(c, "T23")),
    claim!("T24", Theorem, "even q, even m: δ1 is the largest coset leader",
        |p| even_m_at_least(p, 2) && !p.q_is_odd(), |c| ladder_is_top(c, 1)),
    claim!("T3", Theorem, "odd m: dimensions for q^(t+1) + q + 1 ≤ δ ≤ 2q^(t+1) + 2q",
        |p| odd_m_at_least(p, 5), |c| closed_forms(c, "T3")),
    claim!("T4", Theorem, "even m: leader classification of q ∤ x ≤ 2q^t + 2",
        |p| even_m_at_least(p, 4), classifier_check),
    claim!("T6", Theorem, "even m: dimensions for q^t + 2 ≤ δ ≤ 2q^t + 3",
        |p| even_m_at_least(p, 4), |c| closed_forms(c, "T6")),
];

// T1 / T4: every Leader/NonLeader verdict agrees with the oracle.
fn classifier_check(c: &mut Cell) -> CheckResult {
    let q = c.q();
    let t = c.m() / 2;
    let upper = if c.params.m_is_odd() {
        2 * c.params.q_pow(t + 1)? + 2 * q - 1
    } else {
        2 * c.params.q_pow(t)? + 2
    };
    let mut f = Finding::default();
    let mut unclassified = 0u128;
    for x in (1..=upper).filter(|x| x % q != 0) {
        c.tick(x)?;
        let v = if c.params.m_is_odd() {
            classify_leader_odd_m(&c.params, x)?
        } else {
            classify_leader_even_m(&c.params, x)?
        };
        let truth = is_coset_leader(&c.params, x)?;
        match v.value {
            Verdict::Unclassified => unclassified += 1,
            Verdict::Leader if !truth => f.counterexamples.push(c.cx(x, format!("leader ({})", v.source), "non-leader")),
            Verdict::NonLeader if truth => f.counterexamples.push(c.cx(x, format!("non-leader ({})", v.source), "leader")),
            _ => {}
        }
    }
    if unclassified > 0 {
        f.note = Some(format!("{unclassified} values unclassified"));
    }
    Ok(f)
}

// L2 / L5; L5 additionally probes up to 2q^t + 2 without asserting.
fn small_coset_sizes(c: &mut Cell) -> CheckResult {
    let q = c.q();
    let (m, t) = (c.m(), c.m() / 2);
    let want = 2 * m;
    let main = if c.params.m_is_odd() {
        2 * c.params.q_pow(t + 1)? - 2 * q - 1
    } else {
        2 * c.params.q_pow(t)? - 2
    };
    let mut f = Finding::default();
    for x in (1..=main).filter(|x| x % q != 0) {
        c.tick(x)?;
        let s = coset_size(&c.params, x)?;
        if s != want {
            f.counterexamples.push(c.cx(x, want, s));
        }
    }
    if !c.params.m_is_odd() {
        let probe: Vec<String> = (main + 1..=main + 4)
            .filter(|x| x % q != 0)
            .map(|x| Ok::<_, Error>((x, coset_size(&c.params, x)?)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&(_, s)| s != want)
            .map(|(x, s)| format!("|C_{x}| = {s}"))
            .collect();
        if !probe.is_empty() {
            f.note = Some(format!("beyond the stated range: {}", probe.join(", ")));
        }
    }
    Ok(f)
}

fn ladder_are_leaders(c: &mut Cell) -> CheckResult {
    let mut f = Finding::default();
    for (i, d) in c.ladder_values()?.into_iter().enumerate() {
        if !is_coset_leader(&c.params, d)? {
            f.counterexamples.push(c.cx(i as u128 + 1, format!("δ{} = {d} is a leader", i + 1), "non-leader"));
        }
    }
    Ok(f)
}

fn ladder_sizes(c: &mut Cell) -> CheckResult {
    let mut f = Finding::default();
    let claims: Vec<(usize, u128, u32)> = c
        .ladder()?
        .entries
        .iter()
        .filter_map(|e| Some((e.rank, e.value.clone().try_into().ok()?, e.size_claim?)))
        .collect();
    for (rank, d, want) in claims {
        let s = coset_size(&c.params, d)?;
        if s != want {
            f.counterexamples.push(c.cx(rank as u128, format!("|C_δ{rank}| = {want}"), s));
        }
    }
    Ok(f)
}

// L8 / L14: the gap just above δ3 (odd q) or δ2 (even q) holds no leader.
fn gap_non_leaders(c: &mut Cell, rank: usize) -> CheckResult {
    let t = (c.m() - 1) / 2;
    let span = if rank == 3 { ia1_span(t, c.params.q())? } else { ia2_span(t, c.params.q())? };
    let base = c.ladder_values()?[rank - 1];
    let mut f = Finding::default();
    for i in span.a..=span.b {
        c.tick(i)?;
        let x = base + i;
        if is_coset_leader(&c.params, x)? {
            f.counterexamples.push(c.cx(x, "non-leader", "leader"));
        }
    }
    Ok(f)
}

// L9 / L15: above δ_rank only the higher ladder entries are leaders.
fn nothing_above(c: &mut Cell, rank: usize) -> CheckResult {
    let v = c.ladder_values()?;
    let floor = v[rank - 1];
    let allowed = &v[..rank - 1];
    let mut f = Finding::default();
    for l in c.top(rank)? {
        if l > floor && !allowed.contains(&l) {
            f.counterexamples.push(c.cx(l, "non-leader", "leader"));
        }
    }
    Ok(f)
}

// T10 / T16 / T19 / T24: the first `k` ladder entries are the top-k leaders.
fn ladder_is_top(c: &mut Cell, k: usize) -> CheckResult {
    let v = c.ladder_values()?;
    let top = c.top(k)?;
    let mut f = Finding::default();
    for (i, (&want, &got)) in v.iter().zip(&top).take(k).enumerate() {
        if want != got {
            f.counterexamples.push(c.cx(i as u128 + 1, format!("{want}"), got));
        }
    }
    if f.counterexamples.is_empty() {
        let shown: Vec<String> = v.iter().take(k).map(u128::to_string).collect();
        let variant = &c.ladder()?.variant;
        f.note = Some(format!("ladder [{}] ({variant}) matches oracle", shown.join(",")));
    }
    Ok(f)
}

fn ranks_conjecture(c: &mut Cell, ranks: &[usize]) -> CheckResult {
    let v = c.ladder_values()?;
    let k = *ranks.iter().max().expect("nonempty");
    let top = c.top(k)?;
    let mut f = Finding::default();
    let mut parts = Vec::new();
    for &r in ranks {
        let (want, got) = (v[r - 1], top[r - 1]);
        parts.push(format!("δ{}={want}", sub(r)));
        if want != got {
            let leader = is_coset_leader(&c.params, want).unwrap_or(false);
            let what = if leader { "a smaller-ranked leader" } else { "not a coset leader" };
            f.counterexamples.push(c.cx(r as u128, format!("{want} ({what})"), got));
        }
    }
    let ranks: Vec<String> = ranks.iter().map(usize::to_string).collect();
    f.note = Some(if f.counterexamples.is_empty() {
        format!("conjecture consistent: {} match ranks {}", parts.join(", "), ranks.join(","))
    } else {
        format!("conjecture refuted: {} vs oracle ranks {}", parts.join(", "), ranks.join(","))
    });
    Ok(f)
}

fn sub(i: usize) -> char {
    char::from_u32(0x2080 + i as u32).unwrap_or('?')
}

fn partition_check(c: &mut Cell, odd: bool) -> CheckResult {
    let t = (c.m() - 1) / 2;
    let q = c.params.q();
    let (parts, span): (Vec<Interval>, Interval) = if odd {
        (ia1_partition(t, q)?, ia1_span(t, q)?)
    } else {
        (ia2_partition(t, q)?, ia2_span(t, q)?)
    };
    let mut f = Finding::default();
    let want = 1usize << (t - 2);
    if parts.len() != want {
        f.counterexamples.push(c.cx(0, format!("{want} intervals"), parts.len()));
    }
    if !tiles(&parts, span) {
        f.counterexamples.push(c.cx(t as u128, format!("contiguous cover of {span}"), "gap or overlap"));
    }
    Ok(f)
}

fn shift_dominance(c: &mut Cell) -> CheckResult {
    let r = even_m_shape(c.m())?.r();
    if r < 2 {
        return Err(Abort::Budget("no shifts for r = 1".into()));
    }
    if r > MAX_CELL_SIGN_RANK {
        return Err(Abort::Budget(format!("r = {r} beyond {MAX_CELL_SIGN_RANK}")));
    }
    let mut f = Finding::default();
    let s = sign_sequence(r)?;
    for k in 1..s.len() {
        c.tick(k as u128)?;
        for (name, shifted) in [("F", shift_f(r, k)?), ("H", shift_h(r, k)?)] {
            if seq_compare(&shifted, &s)? == std::cmp::Ordering::Less {
                f.counterexamples.push(c.cx(k as u128, format!("{name}^{r}_({k}) ≥ S^{r}"), "less"));
            }
        }
    }
    f.note = Some(format!("r = {r}"));
    Ok(f)
}

// Each rule of the claim is checked at every δ it covers.
fn closed_forms(c: &mut Cell, id: &str) -> CheckResult {
    let n = c.n()?;
    let rows = ClosedFormRows::new(&c.params)?;
    let rules: Vec<_> = rows.rules().iter().filter(|r| r.claim() == id).cloned().collect();
    let hi = rules.iter().map(|r| r.hi).max().unwrap_or(2);
    c.profile(hi - 1)?;
    let profile = &c.profile.as_ref().expect("built").1;
    let mut f = Finding::default();
    let mut checked = 0u128;
    for rule in &rules {
        for delta in rule.lo..=rule.hi {
            c.tick(checked)?;
            checked += 1;
            let t_size = profile.t_size(delta) + u128::from(rule.b == 0);
            let direct = n - t_size;
            match rule.dimension_at(&rows, delta) {
                Some(d) if d == direct => {}
                predicted => {
                    let shown = predicted.map_or("negative".to_string(), |d| d.to_string());
                    f.counterexamples.push(c.cx(delta, format!("{shown} ({}, b={})", rule.label, rule.b), direct));
                }
            }
        }
    }
    f.note = Some(format!("{} rows, {checked} (δ, b) pairs", rules.len()));
    Ok(f)
}

fn lcd_check(c: &mut Cell) -> CheckResult {
    let n = c.n()?;
    let q = c.q();
    let leaders = leaders_with_sizes(&c.params, n / 2)?;
    let md = *c.params.modulus()?;
    let mut f = Finding::default();
    // q^k x for k < 2m must reach n - x: checked with multiplication alone.
    for (i, &(l, _)) in leaders.iter().enumerate() {
        c.tick(i as u128)?;
        let mut y = l;
        let mut closed = false;
        for _ in 0..2 * c.m() {
            if y == n - l {
                closed = true;
                break;
            }
            y = md.mul(y, q);
        }
        if !closed {
            f.counterexamples.push(c.cx(l, format!("{} ∈ C_{l}", n - l), "missing"));
        }
    }
    for delta in [2, n / 4, n / 2, n / 2 + 1, n] {
        for b in [0, 1] {
            if delta < 2 {
                continue;
            }
            let spec = DefiningSetSpec::new(c.params.clone(), delta, b)?;
            if !is_lcd(&spec)? {
                f.counterexamples.push(c.cx(delta, format!("LCD at b={b}"), "not negation-closed"));
            }
        }
    }
    f.note = Some(format!("{} cosets", leaders.len()));
    Ok(f)
}
