//! Parameter sets behind each figure id. Every curve is an ordinary
//! single, pair or sweep-nm configuration, so each emitted file re-runs
//! from its own provenance lines.

use crate::error::{Error, Result};
use crate::metrics::HorizonMode;
use crate::two_qubit::EwlKind;

use super::config::{DeltaRuleKind, Mode, RunConfig, Spacing};

pub const FIGURE_IDS: &[&str] = &[
    "fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig5c", "fig5d", "fig6a",
    "fig6b", "fig6c", "fig6d", "fig7", "fig8", "fig9", "fig10", "fig9plus",
];

/// First zeros of `J_0 … J_3`, as `δ/Ω` ratios.
const BESSEL_RATIOS: [f64; 4] = [2.40483, 3.83170, 5.13562, 6.38016];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub name: String,
    pub config: RunConfig,
}

/// Curves of figure `id`. Only the tolerances, backend and `tau_q` of
/// `base` carry over, so output depends on nothing else.
pub fn figure_curves(id: &str, base: &RunConfig) -> Result<Vec<FigureCurve>> {
    let seed = RunConfig {
        rel_tol: base.rel_tol,
        abs_tol: base.abs_tol,
        backend: base.backend,
        tau_q: base.tau_q,
        ..RunConfig::default()
    };
    let series = |mode: Mode, lambda: f64, delta: f64, omega: f64, t_max: f64, every: f64| RunConfig {
        mode,
        lambda: Some(lambda),
        delta,
        omega,
        t_max: Some(t_max),
        sample_every: Some(every),
        ..seed.clone()
    };
    let curve = |name: String, config: RunConfig| FigureCurve { name, config };
    let omega_name = |w: f64| format!("omega{w}");

    let single_omegas = |lambda: f64, delta_of: &dyn Fn(f64) -> f64, omegas: &[f64], t_max: f64, every: f64| {
        omegas
            .iter()
            .map(|&w| curve(omega_name(w), series(Mode::Single, lambda, delta_of(w), w, t_max, every)))
            .collect::<Vec<_>>()
    };
    let nm = |lambda: f64, rule: DeltaRuleKind, value: f64, lo: f64, hi: f64, n: usize, t_max: f64| RunConfig {
        mode: Mode::SweepNm,
        lambda: Some(lambda),
        delta: if rule == DeltaRuleKind::Fixed { value } else { 0.0 },
        delta_rule: rule,
        delta_ratio: (rule == DeltaRuleKind::Ratio).then_some(value),
        omega_min: Some(lo),
        omega_max: Some(hi),
        omega_points: Some(n),
        omega_spacing: Spacing::Log,
        horizon: HorizonMode::Capped,
        t_max: Some(t_max),
        ..seed.clone()
    };
    let strong_ratio = |name: String, ratio: f64| {
        curve(name, nm(0.01, DeltaRuleKind::Ratio, ratio, 0.05, 40.0, 25, 1e4))
    };
    let pair = |kind: EwlKind, r: f64, lambda: f64, driven: bool, t_max: f64, every: f64| {
        let (delta, omega) = if driven { (BESSEL_RATIOS[0] * 5.0, 5.0) } else { (0.0, 0.0) };
        RunConfig {
            kind,
            r,
            ..series(Mode::Pair, lambda, delta, omega, t_max, every)
        }
    };

    let curves = match id {
        "fig2a" => {
            let mut c = vec![curve("off".into(), series(Mode::Single, 3.0, 0.0, 0.0, 100.0, 0.05))];
            c.extend(single_omegas(3.0, &|_| 10.0, &[0.05, 100.0], 100.0, 0.05));
            c
        }
        "fig2b" => single_omegas(3.0, &|_| 10.0, &[0.5, 1.0], 100.0, 0.05),
        "fig3" => [1.0, 10.0]
            .iter()
            .map(|&d| curve(format!("delta{d}"), nm(3.0, DeltaRuleKind::Fixed, d, 0.01, 100.0, 41, 5e3)))
            .collect(),
        "fig4a" => vec![
            strong_ratio("j0".into(), BESSEL_RATIOS[0]),
            strong_ratio("j1".into(), BESSEL_RATIOS[1]),
        ],
        "fig4b" => vec![strong_ratio("j2".into(), BESSEL_RATIOS[2])],
        "fig4c" => [0.1, 1.0].iter().map(|&k| strong_ratio(format!("ratio{k}"), k)).collect(),
        "fig4d" => [5.0, 10.0].iter().map(|&k| strong_ratio(format!("ratio{k}"), k)).collect(),
        "fig5a" | "fig5b" | "fig5c" | "fig5d" => {
            let n = (id.as_bytes()[4] - b'a') as usize;
            let ratio = BESSEL_RATIOS[n];
            single_omegas(0.01, &|w| ratio * w, &[0.05, 0.5, 5.0], 1e4, 5.0)
        }
        "fig6a" | "fig6b" | "fig6c" | "fig6d" => {
            let omega = [0.001, 0.05, 0.5, 5.0][(id.as_bytes()[4] - b'a') as usize];
            single_omegas(0.01, &|w| BESSEL_RATIOS[0] * w, &[omega], 500.0, 0.05)
        }
        "fig7" => {
            let mut c = vec![curve("off".into(), series(Mode::Single, 0.01, 0.0, 0.0, 2000.0, 1.0))];
            c.extend(single_omegas(0.01, &|_| 5.0, &[0.5, 1.0, 5.0], 2000.0, 1.0));
            c
        }
        "fig8" => single_omegas(0.01, &|w| BESSEL_RATIOS[0] * w, &[0.05, 0.2, 0.5, 5.0], 1e4, 5.0),
        "fig9" | "fig10" => {
            let kind = if id == "fig9" { EwlKind::Psi } else { EwlKind::Phi };
            [1.0, 0.8, 0.5, 0.3]
                .iter()
                .map(|&r| curve(format!("r{r}"), pair(kind, r, 0.1, true, 3e4, 15.0)))
                .collect()
        }
        "fig9plus" => vec![
            curve("psi_off".into(), pair(EwlKind::Psi, 1.0, 0.01, false, 2000.0, 1.0)),
            curve("phi_off".into(), pair(EwlKind::Phi, 1.0, 0.01, false, 2000.0, 1.0)),
            curve("psi_fm".into(), pair(EwlKind::Psi, 1.0, 0.01, true, 1e6, 500.0)),
            curve("phi_fm".into(), pair(EwlKind::Phi, 1.0, 0.01, true, 1e6, 500.0)),
        ],
        _ => {
            return Err(Error::UnknownFigure {
                id: id.to_string(),
                valid: FIGURE_IDS.join(", "),
            })
        }
    };
    Ok(curves)
}
