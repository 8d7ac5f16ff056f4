//! Parsers for the structured flag values: harmonic indices, curve specs,
//! windows, torus mode lists, and probe targets.

use eigencurve_core::functionals::Window;
use eigencurve_core::geometry::{CurveSpec, SpherePoint};
use eigencurve_core::Complex64;

pub fn parse_index(text: &str) -> Result<(u32, i32), String> {
    let (l, m) = text
        .split_once(',')
        .ok_or_else(|| format!("expected l,m but got '{text}'"))?;
    let l: u32 = l.trim().parse().map_err(|e| format!("degree: {e}"))?;
    let m: i32 = m.trim().parse().map_err(|e| format!("order: {e}"))?;
    Ok((l, m))
}

/// `equator`, `tilted:<alpha>`, or `geodesic:<p>,<q>[,<offset>]`.
pub fn parse_curve(text: &str) -> Result<CurveSpec, String> {
    if text == "equator" {
        return Ok(CurveSpec::Equator);
    }
    if let Some(alpha) = text.strip_prefix("tilted:") {
        let tilt: f64 = alpha.trim().parse().map_err(|e| format!("tilt: {e}"))?;
        return CurveSpec::tilted_great_circle(tilt).map_err(|e| e.to_string());
    }
    if let Some(rest) = text.strip_prefix("geodesic:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(format!("expected geodesic:p,q[,offset] but got '{text}'"));
        }
        let p: i64 = parts[0].trim().parse().map_err(|e| format!("p: {e}"))?;
        let q: i64 = parts[1].trim().parse().map_err(|e| format!("q: {e}"))?;
        let offset: f64 = match parts.get(2) {
            Some(o) => o.trim().parse().map_err(|e| format!("offset: {e}"))?,
            None => 0.0,
        };
        return CurveSpec::torus_geodesic(p, q, offset).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown curve '{text}' (expected equator, tilted:<alpha>, or geodesic:<p>,<q>[,<offset>])"
    ))
}

/// `center,halfwidth`.
pub fn parse_window(text: &str) -> Result<Window, String> {
    let (c, h) = text
        .split_once(',')
        .ok_or_else(|| format!("expected center,halfwidth but got '{text}'"))?;
    let center: f64 = c.trim().parse().map_err(|e| format!("center: {e}"))?;
    let halfwidth: f64 = h.trim().parse().map_err(|e| format!("halfwidth: {e}"))?;
    Window::new(center, halfwidth).map_err(|e| e.to_string())
}

/// `theta,phi` in radians.
pub fn parse_target(text: &str) -> Result<SpherePoint, String> {
    let (t, p) = text
        .split_once(',')
        .ok_or_else(|| format!("expected theta,phi but got '{text}'"))?;
    let theta: f64 = t.trim().parse().map_err(|e| format!("theta: {e}"))?;
    let phi: f64 = p.trim().parse().map_err(|e| format!("phi: {e}"))?;
    SpherePoint::new(theta, phi).map_err(|e| e.to_string())
}

/// Torus mode list as one flag value.
#[derive(Debug, Clone)]
pub struct ModeList(pub Vec<(i64, i64, Complex64)>);

/// `m,n[;m,n...]`, unit coefficients (normalized downstream).
pub fn parse_modes(text: &str) -> Result<ModeList, String> {
    let mut out = Vec::new();
    for chunk in text.split(';') {
        let (m, n) = chunk
            .split_once(',')
            .ok_or_else(|| format!("expected m,n in mode '{chunk}'"))?;
        let m: i64 = m.trim().parse().map_err(|e| format!("mode m: {e}"))?;
        let n: i64 = n.trim().parse().map_err(|e| format!("mode n: {e}"))?;
        out.push((m, n, Complex64::new(1.0, 0.0)));
    }
    if out.is_empty() {
        return Err("at least one mode is required".into());
    }
    Ok(ModeList(out))
}

/// Frequency list as one flag value.
#[derive(Debug, Clone)]
pub struct FrequencyList(pub Vec<f64>);

/// Comma-separated list of frequencies.
pub fn parse_nu_list(text: &str) -> Result<FrequencyList, String> {
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("nu: {e}")))
        .collect::<Result<Vec<f64>, String>>()
        .map(FrequencyList)
}
