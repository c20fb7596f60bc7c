//! Bounds for fading ensembles, forward/backward channel pairs and multiband links.

use crate::bounds::{coincide, entanglement_flux, two_way_capacity, BoundReport};
use crate::channels::ChannelSpec;
use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// Channel `E_i` applied with probability `p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEnsemble {
    members: Vec<(f64, ChannelSpec)>,
}

impl ChannelEnsemble {
    pub fn new(members: Vec<(f64, ChannelSpec)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::range("ensemble must have at least one member"));
        }
        if let Some((w, _)) = members.iter().find(|(w, _)| !(0.0..=1.0).contains(w)) {
            return Err(Error::range(format!("weight {w} outside [0, 1]")));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::range(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Equal weights over `specs`.
    pub fn uniform(specs: Vec<ChannelSpec>) -> Result<Self> {
        let w = 1.0 / specs.len().max(1) as f64;
        Self::new(specs.into_iter().map(|s| (w, s)).collect())
    }

    pub fn members(&self) -> &[(f64, ChannelSpec)] {
        &self.members
    }
}

/// `sum_i p_i Phi(E_i)`.
pub fn fading_bound(e: &ChannelEnsemble) -> Result<f64> {
    let mut total = 0.0;
    for (index, (w, spec)) in e.members.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let flux = entanglement_flux(spec);
        if flux.is_infinite() {
            return Err(Error::DivergentMember { index });
        }
        total += w * flux;
    }
    Ok(total)
}

/// Capacity of a forward channel assisted by a distinct backward channel.
pub fn two_way_pair(forward: &ChannelSpec, backward: &ChannelSpec) -> BoundReport {
    let (a, b) = (two_way_capacity(forward), two_way_capacity(backward));
    let lower = if b.lower > a.lower { (b.lower, b.lower_name) } else { (a.lower, a.lower_name) };
    let upper = if b.upper > a.upper { (b.upper, b.upper_name) } else { (a.upper, a.upper_name) };
    let exact = coincide(lower.0, upper.0);
    BoundReport::assemble(lower, upper, exact)
}

/// Sum of per-band bounds. Identical bands are grouped so `n` copies give exactly
/// `n` times the single-band values.
pub fn multiband(bands: &[ChannelSpec]) -> Result<BoundReport> {
    if bands.is_empty() {
        return Err(Error::range("multiband needs at least one band"));
    }
    let mut groups: Vec<(usize, &ChannelSpec, usize)> = Vec::new();
    for (index, band) in bands.iter().enumerate() {
        match groups.iter_mut().find(|(_, s, _)| *s == band) {
            Some(g) => g.2 += 1,
            None => groups.push((index, band, 1)),
        }
    }
    let (mut lower, mut upper, mut exact) = (0.0, 0.0, true);
    let mut names: Option<(&'static str, &'static str)> = None;
    for (index, band, count) in groups {
        let r = two_way_capacity(band);
        if r.upper.is_infinite() {
            return Err(Error::DivergentMember { index });
        }
        lower += count as f64 * r.lower;
        upper += count as f64 * r.upper;
        exact &= r.exact;
        names = Some(match names {
            None => (r.lower_name, r.upper_name),
            Some((l, u)) => (
                if l == r.lower_name { l } else { "sum-of-bands" },
                if u == r.upper_name { u } else { "sum-of-bands" },
            ),
        });
    }
    let (ln, un) = names.expect("nonempty");
    Ok(BoundReport::assemble((lower, ln), (upper, un), exact))
}

/// `W` bands of a lossy fibre with transmissivity `eta`.
pub fn fiber(bands: usize, eta: f64) -> Result<BoundReport> {
    if bands == 0 {
        return Err(Error::range("fibre needs at least one band"));
    }
    multiband(&vec![ChannelSpec::lossy(eta)?; bands])
}
