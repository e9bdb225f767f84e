//! Defining sets, dimensions and Bose distances of `C(n, q, δ, 1)` and
//! `C(n, q, δ + 1, 0)`, computed directly from cosets and from the
//! closed-form tables.
//!
//! A spec with `b = 1` has defining set `T = C_1 ∪ … ∪ C_{δ-1}`; with `b = 0`
//! it is `T_0 = {0} ∪ T`. Scanning `1..δ` in ascending order meets each coset
//! first at its leader, so `|T|` is the sum of `|C_l|` over leaders `l < δ`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{delta_ladder, even_m_shape, DeltaLadder, EvenShape};
use crate::cyclotomic::{coset_leader_of, leaders_in_range, leaders_with_sizes, next_leader_from};
use crate::error::{domain, Error, Result};
use crate::params::CodeParams;

/// Cap on the number of rows `dimension_table` emits.
pub const DEFAULT_TABLE_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSetSpec {
    pub params: CodeParams,
    pub delta: u128,
    pub b: u8,
}

impl DefiningSetSpec {
    pub fn new(params: CodeParams, delta: u128, b: u8) -> Result<Self> {
        let n = params.n_native()?;
        if delta < 2 || delta > n {
            return Err(domain(format!("delta = {delta} must lie in [2, {n}]")));
        }
        if b > 1 {
            return Err(domain(format!("b must be 0 or 1 (got b = {b})")));
        }
        Ok(DefiningSetSpec { params, delta, b })
    }

    fn n(&self) -> u128 {
        self.params.n().expect("validated at construction")
    }
}

/// One row of a dimension table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub q: u64,
    pub m: u32,
    pub n: u128,
    pub delta: u128,
    pub b: u8,
    pub t_size: u128,
    pub dimension: u128,
    /// Smallest coset leader `>= δ`, or `n + 1` when `T` holds every nonzero
    /// residue. Always the narrow-sense value, also for `b = 0` rows.
    pub bose_distance: u128,
    pub closed_form_dimension: Option<u128>,
    pub closed_form_source: Option<String>,
    /// Whether the closed form (when present) equals the direct dimension.
    pub agrees: Option<bool>,
}

pub fn defining_set_size(spec: &DefiningSetSpec) -> Result<u128> {
    let narrow: u128 = leaders_with_sizes(&spec.params, spec.delta - 1)?
        .iter()
        .map(|&(_, s)| s as u128)
        .sum();
    Ok(narrow + u128::from(spec.b == 0))
}

/// `n - |T|`.
pub fn dimension(spec: &DefiningSetSpec) -> Result<u128> {
    Ok(spec.n() - defining_set_size(spec)?)
}

/// Largest `d >= δ` with `{1, …, d-1} ⊆ T`: the smallest coset leader `>= δ`,
/// or the sentinel `n + 1`.
pub fn bose_distance(spec: &DefiningSetSpec) -> Result<u128> {
    if spec.b != 1 {
        return Err(domain("Bose distance is defined here for narrow-sense specs (b = 1)"));
    }
    let n = spec.n();
    if spec.delta >= n {
        return Ok(n + 1);
    }
    Ok(next_leader_from(&spec.params, spec.delta)?.unwrap_or(n + 1))
}

/// True iff `T` is closed under `x ↦ n - x`.
pub fn is_lcd(spec: &DefiningSetSpec) -> Result<bool> {
    let n = spec.n();
    let leaders = leaders_in_range(&spec.params, 1, spec.delta - 1)?;
    for &l in &leaders {
        let mirror = coset_leader_of(&spec.params, n - l)?;
        if leaders.binary_search(&mirror).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first applicable closed-form row, if any.
pub fn closed_form_dimension(spec: &DefiningSetSpec) -> Result<Option<(u128, String)>> {
    Ok(ClosedFormRows::new(&spec.params)?
        .evaluate(spec.delta, spec.b)
        .into_iter()
        .next())
}

/// Every closed-form row covering `(δ, b)`; boundary values may be covered
/// by more than one.
pub fn closed_form_candidates(spec: &DefiningSetSpec) -> Result<Vec<(u128, String)>> {
    Ok(ClosedFormRows::new(&spec.params)?.evaluate(spec.delta, spec.b))
}

/// One table row: `δ ∈ [lo, hi]` gives dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRule {
    pub lo: u128,
    pub hi: u128,
    pub b: u8,
    pub formula: RowFormula,
    pub label: String,
}

impl RowRule {
    /// Claim id the row belongs to, e.g. `T3` for `T3(2) row1`.
    pub fn claim(&self) -> &str {
        let end = self
            .label
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.label.len());
        &self.label[..end]
    }

    pub fn dimension_at(&self, rows: &ClosedFormRows, delta: u128) -> Option<u128> {
        rows.apply(self, delta)
    }
}

/// How a row's dimension depends on δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowFormula {
    /// A fixed dimension.
    Constant(u128),
    /// `base - 2m·⌈(δ-1)(1-1/q)⌉ + bonus`.
    CountingNonMultiples { bonus: u128 },
}

/// All closed-form dimension rules for one `(q, m)`.
#[derive(Debug, Clone)]
pub struct ClosedFormRows {
    q: u128,
    m: u128,
    n: u128,
    rules: Vec<RowRule>,
}

impl ClosedFormRows {
    pub fn new(params: &CodeParams) -> Result<Self> {
        let n = params.n_native()?;
        let mut rows = ClosedFormRows {
            q: params.q() as u128,
            m: params.m() as u128,
            n,
            rules: Vec::new(),
        };
        if params.q() < 3 {
            return Ok(rows);
        }
        if params.m_is_odd() && params.m() >= 5 {
            rows.small_delta_odd_m(params)?;
        }
        if !params.m_is_odd() && params.m() >= 4 {
            rows.small_delta_even_m(params)?;
        }
        let ladder = delta_ladder(params)?;
        match (params.m_is_odd(), params.q_is_odd()) {
            (true, true) => rows.odd_m_odd_q(&ladder)?,
            (true, false) => rows.odd_m_even_q(&ladder, params.m())?,
            (false, true) => rows.even_m_odd_q(&ladder, params.m())?,
            (false, false) => {}
        }
        Ok(rows)
    }

    pub fn rules(&self) -> &[RowRule] {
        &self.rules
    }

    /// Dimensions predicted for `(δ, b)`, one per covering rule.
    pub fn evaluate(&self, delta: u128, b: u8) -> Vec<(u128, String)> {
        self.rules
            .iter()
            .filter(|r| r.b == b && r.lo <= delta && delta <= r.hi)
            .filter_map(|r| Some((self.apply(r, delta)?, r.label.clone())))
            .collect()
    }

    fn apply(&self, rule: &RowRule, delta: u128) -> Option<u128> {
        match rule.formula {
            RowFormula::Constant(d) => Some(d),
            RowFormula::CountingNonMultiples { bonus } => {
                let base = if rule.b == 1 { self.n } else { self.n - 1 };
                let d1 = delta - 1;
                let count = d1 - d1 / self.q;
                (base + bonus).checked_sub(2 * self.m * count)
            }
        }
    }

    fn push(&mut self, lo: u128, hi: u128, b: u8, formula: RowFormula, label: String) {
        if lo <= hi {
            self.rules.push(RowRule {
                lo,
                hi: hi.min(self.n),
                b,
                formula,
                label,
            });
        }
    }

    fn both(&mut self, lo: u128, hi: u128, f1: RowFormula, f0: RowFormula, id: &str, row: &str) {
        self.push(lo, hi, 1, f1, format!("{id} {row}"));
        self.push(lo, hi, 0, f0, format!("{id}(2) {row}"));
    }

    fn small_delta_odd_m(&mut self, params: &CodeParams) -> Result<()> {
        let (q, m) = (self.q, self.m);
        let t = (params.m() - 1) / 2;
        let big = params.q_pow(t + 1)?;
        let small = params.q_pow(t)?;
        let count = |bonus| RowFormula::CountingNonMultiples { bonus };
        self.both(big + q + 1, big + small - 2, count(4 * m * (q - 1)), count(4 * m * (q - 1)), "T3", "row1");
        for alpha in 1..=q - 2 {
            let bonus = 4 * m * (alpha + q - 1);
            self.both(
                big + alpha * small + 2,
                big + (alpha + 1) * small - 2,
                count(bonus),
                count(bonus),
                "T3",
                &format!("row2 α={alpha}"),
            );
        }
        self.both(big + (q - 1) * small + 2, 2 * big - 2 * q - 1, count(8 * m * (q - 1)), count(8 * m * (q - 1)), "T3", "row3");
        // The printed constant reads -6q+7; counting leaders below 2q^{t+1}+2q gives -6q+6.
        let span = 2 * big - 2 * small - 6 * q + 6;
        let tail = 2 * m * span;
        let (n, qm) = (self.n, self.n - 1);
        if tail <= qm {
            self.both(
                2 * big - 2 * q + 1,
                2 * big + 2 * q,
                RowFormula::Constant(n - tail),
                RowFormula::Constant(qm - tail),
                "T3",
                "row4",
            );
        }
        Ok(())
    }

    fn small_delta_even_m(&mut self, params: &CodeParams) -> Result<()> {
        let (q, m) = (self.q, self.m);
        let half = params.q_pow(params.m() / 2)?;
        let count = RowFormula::CountingNonMultiples { bonus: 2 * m };
        self.both(half + 2, 2 * half - 2, count, count, "T6", "row1");
        let tail = 4 * m * (half - half / q - 1);
        self.both(
            2 * half - 1,
            2 * half + 3,
            RowFormula::Constant(self.n - tail),
            RowFormula::Constant(self.n - 1 - tail),
            "T6",
            "row2",
        );
        Ok(())
    }

    /// Plateau rows `δ ∈ (δ_{i+1}, δ_i]` from ladder values and dimensions.
    fn plateaus(&mut self, ladder: &DeltaLadder, id: &str, dims_b1: &[u128], dims_b0: &[u128]) -> Result<()> {
        let v = ladder
            .values()
            .ok_or_else(|| Error::Overflow("ladder value beyond u128".into()))?;
        let n = self.n;
        // Rank 0 stands for the open top (δ1, n].
        for (i, &d) in dims_b1.iter().enumerate() {
            let (lo, hi) = if i == 0 { (v[0] + 1, n) } else { (v[i] + 1, v[i - 1]) };
            let label = if i == 0 {
                format!("{id}: [n, {d}, n]")
            } else {
                format!("{id}: [n, {d}, δ{}]", subscript(i))
            };
            self.push(lo, hi, 1, RowFormula::Constant(d), label);
        }
        for (i, &d) in dims_b0.iter().enumerate() {
            let i = i + 1;
            let (lo, hi) = (v[i] + 1, v[i - 1]);
            self.push(lo, hi, 0, RowFormula::Constant(d), format!("{id}(2): [n, {d}, 2δ{}]", subscript(i)));
        }
        Ok(())
    }

    fn odd_m_odd_q(&mut self, ladder: &DeltaLadder) -> Result<()> {
        let m = self.m;
        self.plateaus(
            ladder,
            "T12",
            &[1, 2, 4, 2 * m + 4, 4 * m + 4, 6 * m + 4],
            &[1, 3, 2 * m + 3, 4 * m + 3, 6 * m + 3],
        )
    }

    fn odd_m_even_q(&mut self, ladder: &DeltaLadder, m_raw: u32) -> Result<()> {
        let m = self.m;
        if m_raw == 3 {
            // |C_δ1| = 2, |C_δ2| = 2m, |C_δ3| = 2, |C_δ4| = 2m.
            self.plateaus(
                ladder,
                "T18 m=3",
                &[1, 3, 2 * m + 3, 2 * m + 5, 4 * m + 5],
                &[2, 2 * m + 2, 2 * m + 4, 4 * m + 4],
            )
        } else {
            self.plateaus(
                ladder,
                "T18",
                &[1, 3, 2 * m + 3, 4 * m + 3, 6 * m + 3],
                &[2, 2 * m + 2, 4 * m + 2, 6 * m + 2],
            )
        }
    }

    fn even_m_odd_q(&mut self, ladder: &DeltaLadder, m_raw: u32) -> Result<()> {
        let v = ladder
            .values()
            .ok_or_else(|| Error::Overflow("ladder value beyond u128".into()))?;
        let (d1, d2) = (v[0], v[1]);
        let size2 = match even_m_shape(m_raw)? {
            EvenShape::Mixed { r, .. } => 1u128 << r,
            EvenShape::Two | EvenShape::PowerOfTwo { .. } => 2 * self.m,
        };
        let n = self.n;
        let c = RowFormula::Constant;
        self.push(d2, d2, 1, c(2 + size2), format!("T23: [n, {}, δ₂]", 2 + size2));
        self.push(d2 + 1, d1, 1, c(2), "T23: [n, 2, δ₁]".into());
        self.push(d1 + 1, n, 1, c(1), "T23: [n, 1, n]".into());
        self.push(d2, d2, 0, c(1 + size2), format!("T23(2): [n, {}, 2δ₂]", 1 + size2));
        self.push(d2 + 1, d1, 0, c(1), "T23(2): [n, 1, 2δ₁]".into());
        Ok(())
    }
}

fn subscript(i: usize) -> char {
    char::from_u32(0x2080 + i as u32).unwrap_or('?')
}

/// Direct dimensions for every `δ` in `range`, alongside the closed forms.
pub fn dimension_table(params: &CodeParams, range: RangeInclusive<u128>, b: u8) -> Result<Vec<DimensionRecord>> {
    dimension_table_within(params, range, b, DEFAULT_TABLE_BUDGET)
}

pub fn dimension_table_within(
    params: &CodeParams,
    range: RangeInclusive<u128>,
    b: u8,
    budget: u128,
) -> Result<Vec<DimensionRecord>> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Ok(Vec::new());
    }
    let n = params.n_native()?;
    DefiningSetSpec::new(params.clone(), lo, b)?;
    DefiningSetSpec::new(params.clone(), hi, b)?;
    if hi - lo + 1 > budget {
        return Err(Error::Resource {
            what: format!("dimension table of {} rows", hi - lo + 1),
            bound: budget,
        });
    }
    // No leader exceeds n/2.
    let profile = LeaderProfile::build(params, (hi - 1).min(n / 2))?;
    let beyond = if hi > n / 2 { None } else { next_leader_from(params, hi)? };
    let rows = ClosedFormRows::new(params)?;
    let extra = u128::from(b == 0);
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for delta in lo..=hi {
        let t_size = profile.t_size(delta) + extra;
        let dimension = n - t_size;
        let bose_distance = profile.next_leader(delta).or(beyond).unwrap_or(n + 1);
        let cf = rows.evaluate(delta, b).into_iter().next();
        out.push(DimensionRecord {
            q: params.q(),
            m: params.m(),
            n,
            delta,
            b,
            t_size,
            dimension,
            bose_distance,
            agrees: cf.as_ref().map(|(d, _)| *d == dimension),
            closed_form_dimension: cf.as_ref().map(|(d, _)| *d),
            closed_form_source: cf.map(|(_, s)| s),
        });
    }
    Ok(out)
}

/// A single record for one spec.
pub fn dimension_record(spec: &DefiningSetSpec) -> Result<DimensionRecord> {
    let params = &spec.params;
    let t_size = defining_set_size(spec)?;
    let n = spec.n();
    let dimension = n - t_size;
    let narrow = DefiningSetSpec { b: 1, ..spec.clone() };
    let bose = bose_distance(&narrow)?;
    let cf = closed_form_dimension(spec)?;
    Ok(DimensionRecord {
        q: params.q(),
        m: params.m(),
        n,
        delta: spec.delta,
        b: spec.b,
        t_size,
        dimension,
        bose_distance: bose,
        agrees: cf.as_ref().map(|(d, _)| *d == dimension),
        closed_form_dimension: cf.as_ref().map(|(d, _)| *d),
        closed_form_source: cf.map(|(_, s)| s),
    })
}

/// Ascending coset leaders up to a bound, with prefix sums of coset sizes.
#[derive(Debug, Clone)]
pub struct LeaderProfile {
    leaders: Vec<u128>,
    prefix: Vec<u128>,
}

impl LeaderProfile {
    /// Leaders in `[1, hi]`; `hi = 0` gives an empty profile.
    pub fn build(params: &CodeParams, hi: u128) -> Result<Self> {
        let pairs = if hi == 0 { Vec::new() } else { leaders_with_sizes(params, hi)? };
        let mut prefix = Vec::with_capacity(pairs.len() + 1);
        prefix.push(0u128);
        let mut acc = 0u128;
        let mut leaders = Vec::with_capacity(pairs.len());
        for (l, s) in pairs {
            acc += s as u128;
            prefix.push(acc);
            leaders.push(l);
        }
        Ok(LeaderProfile { leaders, prefix })
    }

    pub fn leaders(&self) -> &[u128] {
        &self.leaders
    }

    /// `|C_1 ∪ … ∪ C_{δ-1}|`, valid while `δ - 1` is within the profile.
    pub fn t_size(&self, delta: u128) -> u128 {
        let k = self.leaders.partition_point(|&l| l < delta);
        self.prefix[k]
    }

    /// Smallest profiled leader `>= δ`.
    pub fn next_leader(&self, delta: u128) -> Option<u128> {
        let k = self.leaders.partition_point(|&l| l < delta);
        self.leaders.get(k).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::orbit;
    use std::collections::BTreeSet;

    fn spec(q: u64, m: u32, delta: u128, b: u8) -> DefiningSetSpec {
        DefiningSetSpec::new(CodeParams::new(q, m).unwrap(), delta, b).unwrap()
    }

    // Independent oracle: materialize T as a set of residues.
    fn naive_t(q: u64, m: u32, delta: u128, b: u8) -> BTreeSet<u128> {
        let p = CodeParams::new(q, m).unwrap();
        let mut t = BTreeSet::new();
        if b == 0 {
            t.insert(0);
        }
        for i in 1..delta {
            t.extend(orbit(&p, i).unwrap().elements.unwrap());
        }
        t
    }

    #[test]
    fn size_examples() {
        assert_eq!(defining_set_size(&spec(3, 2, 2, 1)).unwrap(), 4);
        assert_eq!(defining_set_size(&spec(3, 2, 3, 1)).unwrap(), 8);
        assert_eq!(defining_set_size(&spec(3, 2, 2, 0)).unwrap(), 5);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&spec(3, 2, 2, 1)).unwrap(), 6);
        assert_eq!(dimension(&spec(3, 2, 6, 1)).unwrap(), 1);
        assert_eq!(dimension(&spec(3, 5, 31, 1)).unwrap(), 84);
        assert_eq!(dimension(&spec(3, 2, 10, 0)).unwrap(), 0);
    }

    #[test]
    fn bose_examples() {
        assert_eq!(bose_distance(&spec(3, 2, 2, 1)).unwrap(), 2);
        assert_eq!(bose_distance(&spec(3, 2, 4, 1)).unwrap(), 5);
        assert_eq!(bose_distance(&spec(3, 5, 123, 1)).unwrap(), 245);
        assert_eq!(bose_distance(&spec(3, 5, 244, 1)).unwrap(), 245);
        assert!(bose_distance(&spec(3, 2, 4, 0)).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            closed_form_dimension(&spec(3, 5, 31, 1)).unwrap(),
            Some((84, "T3 row1".to_string()))
        );
        assert_eq!(
            closed_form_dimension(&spec(3, 5, 122, 1)).unwrap(),
            Some((2, "T12: [n, 2, δ₁]".to_string()))
        );
        // δ₁ = 122, so δ = 123 is already on the top plateau.
        assert_eq!(
            closed_form_dimension(&spec(3, 5, 123, 1)).unwrap(),
            Some((1, "T12: [n, 1, n]".to_string()))
        );
        assert_eq!(
            closed_form_dimension(&spec(3, 5, 200, 1)).unwrap(),
            Some((1, "T12: [n, 1, n]".to_string()))
        );
        assert_eq!(closed_form_dimension(&spec(3, 5, 5, 1)).unwrap(), None);
    }

    #[test]
    fn lcd_examples() {
        assert!(is_lcd(&spec(3, 2, 3, 1)).unwrap());
        for delta in [2u128, 17, 47, 61, 122, 200, 244] {
            for b in [0, 1] {
                assert!(is_lcd(&spec(3, 5, delta, b)).unwrap());
            }
        }
    }

    #[test]
    fn table_examples() {
        let p = CodeParams::new(3, 2).unwrap();
        let dims: Vec<u128> = dimension_table(&p, 2..=6, 1).unwrap().iter().map(|r| r.dimension).collect();
        // C_3 ⊂ C_1 and C_4 ⊂ C_2, so δ = 5 adds nothing; C_5 = {5} enters at δ = 6.
        assert_eq!(dims, vec![6, 2, 2, 2, 1]);
        let p4 = CodeParams::new(4, 2).unwrap();
        assert_eq!(dimension_table(&p4, 2..=2, 1).unwrap()[0].dimension, 13);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = dimension_table(&p, 5..=4, 1).unwrap();
        assert!(empty.is_empty());
        assert!(dimension_table(&p, 1..=4, 1).is_err());
        assert!(dimension_table(&p, 2..=11, 1).is_err());
        assert!(matches!(
            dimension_table_within(&p, 2..=10, 1, 3),
            Err(Error::Resource { bound: 3, .. })
        ));
    }

    #[test]
    fn table_matches_pointwise_and_naive() {
        for (q, m) in [(3u64, 3u32), (4, 3), (3, 4), (5, 2), (2, 5)] {
            let p = CodeParams::new(q, m).unwrap();
            let n = p.n().unwrap();
            for b in [0u8, 1] {
                let table = dimension_table(&p, 2..=n, b).unwrap();
                for r in table.iter().step_by(7) {
                    let s = spec(q, m, r.delta, b);
                    assert_eq!(dimension_record(&s).unwrap(), *r);
                    assert_eq!(r.t_size, naive_t(q, m, r.delta, b).len() as u128);
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        let p = CodeParams::new(3, 2).unwrap();
        assert!(DefiningSetSpec::new(p.clone(), 1, 1).is_err());
        assert!(DefiningSetSpec::new(p.clone(), 11, 1).is_err());
        assert!(DefiningSetSpec::new(p, 3, 2).is_err());
    }
}
