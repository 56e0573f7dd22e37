//! Schwarz–Christoffel maps for the L-hexagon, its degenerations, and the collapsed path.
//!
//! A polygon with `n` vertices listed counterclockwise is the image of the upper half-plane
//! under `z(w) = base + scale · direction · ∫_{w₀}^{w} Π (ζ − wⱼ)^{αⱼ − 1} dζ`, where the
//! last vertex sits at `w = ∞` and `direction` is the unit vector of the side entering it.
//!
//! L-hexagon vertices: `A = (0,0)`, `B = (q,0)`, `C = (q,h₁)`, `D = (1,h₁)`, `E = (1,H)`,
//! `F = (0,H)`, listed from `B` so that `A` is the vertex at infinity.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScError {
    #[error("quadrature did not converge")]
    QuadratureFailure,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("root left the positive chamber")]
    NonPositiveSolution,
    #[error("parameters out of range")]
    BadParameters,
}

impl ScError {
    pub fn code(&self) -> &'static str {
        match self {
            ScError::QuadratureFailure => "QuadratureFailure",
            ScError::NoConvergence { .. } => "NoConvergence",
            ScError::NonPositiveSolution => "NonPositiveSolution",
            ScError::BadParameters => "BadParameters",
        }
    }
}

// ---------------------------------------------------------------- quadrature

#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub const NODES: usize = 20;

pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    Rule { nodes, weights }
}

/// Nodes and weights for `∫₋₁¹ (1 − x)^a (1 + x)^b f(x) dx`.
#[allow(clippy::approx_constant)]
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Rule {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let ab = a + b;
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        if i == 0 {
            let an = a / nf;
            let bn = b / nf;
            let r1 = (1.0 + a) * (2.78 / (4.0 + nf * nf) + 0.768 * an / nf);
            let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
            z = 1.0 - r1 / r2;
        } else if i == 1 {
            let r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
            let r2 = 1.0 + 0.06 * (nf - 8.0) * (1.0 + 0.12 * a) / nf;
            let r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * a.abs()) / nf;
            z -= (1.0 - z) * r1 * r2 * r3;
        } else if i == 2 {
            let r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
            let r2 = 1.0 + 0.22 * (nf - 8.0) / nf;
            let r3 = 1.0 + 8.0 * b / ((6.28 + b) * nf * nf);
            z -= (x[0] - z) * r1 * r2 * r3;
        } else if i == n - 2 {
            let r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
            let r2 = 1.0 / (1.0 + 0.639 * (nf - 4.0) / (1.0 + 0.71 * (nf - 4.0)));
            let r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * nf * nf));
            z += (z - x[n - 4]) * r1 * r2 * r3;
        } else if i == n - 1 {
            let r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
            let r2 = 1.0 / (1.0 + 0.22 * (nf - 8.0) / nf);
            let r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * nf * nf));
            z += (z - x[n - 3]) * r1 * r2 * r3;
        } else {
            z = 3.0 * x[i - 1] - 3.0 * x[i - 2] + x[i - 3];
        }
        let (mut p1, mut p2, mut pp, mut temp);
        let mut its = 0;
        loop {
            temp = 2.0 + ab;
            p1 = (a - b + temp * z) / 2.0;
            p2 = 1.0;
            for j in 2..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                temp = 2.0 * jf + ab;
                let aa = 2.0 * jf * (jf + ab) * (temp - 2.0);
                let bb = (temp - 1.0) * (a * a - b * b + temp * (temp - 2.0) * z);
                let cc = 2.0 * (jf - 1.0 + a) * (jf - 1.0 + b) * temp;
                p1 = (bb * p2 - cc * p3) / aa;
            }
            pp = (nf * (a - b - temp * z) * p1 + 2.0 * (nf + a) * (nf + b) * p2) / (temp * (1.0 - z * z));
            let z1 = z;
            z = z1 - p1 / pp;
            its += 1;
            if (z - z1).abs() <= 1e-15 || its > 100 {
                break;
            }
        }
        x[i] = z;
        w[i] = libm::exp(libm::lgamma(a + nf) + libm::lgamma(b + nf) - libm::lgamma(nf + 1.0) - libm::lgamma(nf + ab + 1.0))
            * temp
            * libm::pow(2.0, ab)
            / (pp * p2);
    }
    Rule { nodes: x, weights: w }
}

fn arg_upper(z: C64) -> f64 {
    if z.im <= 0.0 && z.re < 0.0 {
        PI
    } else {
        libm::atan2(z.im.max(0.0), z.re)
    }
}

/// `z^β` with the argument of `z` taken in `[0, π]`.
fn pow_upper(z: C64, beta: f64) -> C64 {
    if beta == 0.0 {
        return C64::new(1.0, 0.0);
    }
    C64::from_polar(libm::pow(z.norm(), beta), beta * arg_upper(z))
}

struct Integrator<'a> {
    w: &'a [f64],
    beta: &'a [f64],
    gl: Rule,
    jac: Vec<(f64, Rule)>,
}

const MAX_DEPTH: usize = 80;

impl<'a> Integrator<'a> {
    fn new(w: &'a [f64], beta: &'a [f64]) -> Self {
        let mut jac: Vec<(f64, Rule)> = Vec::new();
        for &b in beta {
            if b != 0.0 && !jac.iter().any(|(x, _)| *x == b) {
                jac.push((b, gauss_jacobi(NODES, 0.0, b)));
            }
        }
        Integrator { w, beta, gl: gauss_legendre(NODES), jac }
    }

    fn jacobi(&self, b: f64) -> &Rule {
        &self.jac.iter().find(|(x, _)| *x == b).expect("rule").1
    }

    fn g(&self, z: C64, skip: Option<usize>) -> C64 {
        let mut v = C64::new(1.0, 0.0);
        for (k, (&wk, &bk)) in self.w.iter().zip(self.beta).enumerate() {
            if Some(k) != skip {
                v *= pow_upper(z - wk, bk);
            }
        }
        v
    }

    fn nearest_other(&self, z: C64, skip: Option<usize>) -> f64 {
        self.w
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip && self.beta[*k] != 0.0)
            .map(|(_, &wk)| (z - wk).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn gl_panel(&self, a: C64, b: C64) -> C64 {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        let mut s = C64::new(0.0, 0.0);
        for (x, wt) in self.gl.nodes.iter().zip(&self.gl.weights) {
            s += self.g(mid + half * *x, None) * *wt;
        }
        s * half
    }

    fn segment_distance(&self, a: C64, b: C64) -> f64 {
        let d = b - a;
        let l2 = d.norm_sqr();
        self.w
            .iter()
            .zip(self.beta)
            .filter(|(_, &bk)| bk != 0.0)
            .map(|(&wk, _)| {
                let p = C64::new(wk, 0.0);
                let t = if l2 == 0.0 { 0.0 } else { (((p - a) * d.conj()).re / l2).clamp(0.0, 1.0) };
                (p - (a + d * t)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn smooth(&self, a: C64, b: C64, depth: usize) -> Result<C64, ScError> {
        let len = (b - a).norm();
        if len == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if depth > MAX_DEPTH {
            return Err(ScError::QuadratureFailure);
        }
        let m = (a + b) / 2.0;
        if self.segment_distance(a, b) < len {
            return Ok(self.smooth(a, m, depth + 1)? + self.smooth(m, b, depth + 1)?);
        }
        let whole = self.gl_panel(a, b);
        let halves = self.gl_panel(a, m) + self.gl_panel(m, b);
        if !(whole.re.is_finite() && whole.im.is_finite()) {
            return Err(ScError::QuadratureFailure);
        }
        let floor = 1e-13 * (a.norm() + b.norm());
        if (whole - halves).norm() <= 1e-11 * whole.norm().max(1e-300) || len < floor {
            Ok(halves)
        } else {
            Ok(self.smooth(a, m, depth + 1)? + self.smooth(m, b, depth + 1)?)
        }
    }

    /// `∫` over the segment from the prevertex `j` toward `b`, with the singular factor
    /// handled by a Gauss–Jacobi panel.
    fn from_prevertex(&self, j: usize, b: C64, max_len: f64) -> Result<(C64, C64), ScError> {
        let a = C64::new(self.w[j], 0.0);
        let len = (b - a).norm();
        let u = (b - a) / len;
        let r = max_len.min(len).min(self.nearest_other(a, Some(j)) / 2.0);
        let beta = self.beta[j];
        let end = a + u * r;
        let mut s = C64::new(0.0, 0.0);
        if beta == 0.0 {
            return Ok((self.smooth(a, end, 0)?, end));
        }
        let rule = self.jacobi(beta);
        for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
            s += self.g(a + u * (r * (1.0 + x) / 2.0), Some(j)) * *wt;
        }
        let factor = pow_upper(u, beta) * libm::pow(r / 2.0, beta) * u * (r / 2.0);
        Ok((s * factor, end))
    }

    /// `∫` from prevertex `j` to the point `b` along a straight segment.
    fn prevertex_to(&self, j: usize, b: C64) -> Result<C64, ScError> {
        let (head, end) = self.from_prevertex(j, b, f64::INFINITY)?;
        Ok(head + self.smooth(end, b, 0)?)
    }

    /// `∫` along the real axis between consecutive prevertices `j < k`.
    fn side(&self, j: usize, k: usize) -> Result<C64, ScError> {
        let a = self.w[j];
        let b = self.w[k];
        let mid = C64::new((a + b) / 2.0, 0.0);
        let half = (b - a) / 2.0;
        let (h1, e1) = self.from_prevertex(j, mid, half)?;
        let (h2, e2) = self.from_prevertex(k, mid, half)?;
        Ok(h1 + self.smooth(e1, mid, 0)? - h2 - self.smooth(e2, mid, 0)?)
    }
}

// ---------------------------------------------------------------- SC data

/// Schwarz–Christoffel data. The last vertex is the image of `∞`, so `exponents` has one
/// more entry than `prevertices`.
#[derive(Clone, Debug, PartialEq)]
pub struct SCHexagon {
    pub prevertices: Vec<f64>,
    /// Interior angles over `π`.
    pub exponents: Vec<f64>,
    pub scale: f64,
    pub direction: C64,
    pub base: C64,
    /// Vertex names, `'A'`…`'F'` and `'M'` for a straight marked point.
    pub labels: Vec<char>,
}

impl SCHexagon {
    fn betas(&self) -> Vec<f64> {
        self.exponents[..self.prevertices.len()].iter().map(|a| a - 1.0).collect()
    }

    /// Raw integrals along the finite sides.
    pub fn raw_sides(&self) -> Result<Vec<C64>, ScError> {
        let beta = self.betas();
        let it = Integrator::new(&self.prevertices, &beta);
        (0..self.prevertices.len() - 1).map(|k| it.side(k, k + 1)).collect()
    }

    pub fn side_lengths(&self) -> Result<Vec<f64>, ScError> {
        Ok(self.raw_sides()?.iter().map(|s| s.norm() * self.scale).collect())
    }

    /// Images of the finite prevertices.
    pub fn vertex_images(&self) -> Result<Vec<C64>, ScError> {
        let mut out = vec![self.base];
        let k = self.scale * self.direction;
        for s in self.raw_sides()? {
            let last = *out.last().unwrap();
            out.push(last + s * k);
        }
        Ok(out)
    }

    /// Image of `∞`, from the far end of the last finite side.
    pub fn infinite_vertex(&self) -> Result<C64, ScError> {
        let beta = self.betas();
        let it = Integrator::new(&self.prevertices, &beta);
        let n = self.prevertices.len();
        let last = self.prevertices[n - 1];
        let span = last - self.prevertices[0];
        let r = span.max(1.0);
        let head = it.prevertex_to(n - 1, C64::new(last + r, 0.0))?;
        // ζ = last + r/s maps s ∈ (0, 1] onto [last + r, ∞); the integrand is s^b times a
        // function analytic near [0, 1].
        let b = -beta.iter().sum::<f64>() - 2.0;
        let phi = |s: f64| it.g(C64::new(last + r / s, 0.0), None) * (r / (s * s)) * libm::pow(s, -b);
        let jr = gauss_jacobi(NODES, 0.0, b);
        let c = 0.5;
        let mut tail = C64::new(0.0, 0.0);
        for (x, wt) in jr.nodes.iter().zip(&jr.weights) {
            tail += phi(c * (1.0 + x) / 2.0) * *wt;
        }
        tail *= libm::pow(c / 2.0, b + 1.0);
        let gl = gauss_legendre(NODES);
        for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
            let s = 0.75 + 0.25 * x;
            tail += phi(s) * libm::pow(s, b) * (0.25 * wt);
        }
        let imgs = self.vertex_images()?;
        Ok(imgs[n - 1] + (head + tail) * self.scale * self.direction)
    }

    /// Image of a point of the closed upper half-plane.
    pub fn sc_map(&self, z: C64) -> Result<C64, ScError> {
        if z.im < 0.0 {
            return Err(ScError::BadParameters);
        }
        let (j, _) = self
            .prevertices
            .iter()
            .enumerate()
            .map(|(k, &w)| (k, (z - w).norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        self.sc_map_from(j, z)
    }

    /// Image of `z` integrating from prevertex `j`.
    pub fn sc_map_from(&self, j: usize, z: C64) -> Result<C64, ScError> {
        let imgs = self.vertex_images()?;
        if z == C64::new(self.prevertices[j], 0.0) {
            return Ok(imgs[j]);
        }
        let beta = self.betas();
        let it = Integrator::new(&self.prevertices, &beta);
        Ok(imgs[j] + it.prevertex_to(j, z)? * self.scale * self.direction)
    }

    /// Rectangle with prevertices `0, 1, x` and the fourth corner at `∞`.
    pub fn rectangle(x: f64) -> Self {
        SCHexagon {
            prevertices: vec![0.0, 1.0, x],
            exponents: vec![0.5; 4],
            scale: 1.0,
            direction: C64::new(1.0, 0.0),
            base: C64::new(0.0, 0.0),
            labels: vec!['A', 'B', 'C', 'D'],
        }
    }
}

// ---------------------------------------------------------------- small linear algebra

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Damped Newton with central-difference Jacobian and backtracking on `‖F‖`. Stops at
/// `‖F‖ < tol`, or at `‖F‖ < accept` once steps stop reducing the residual.
fn newton<F>(mut x: Vec<f64>, f: F, tol: f64, accept: f64, max_iter: usize, fd: f64) -> Result<(Vec<f64>, f64), ScError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, ScError>,
{
    let n = x.len();
    let mut r = f(&x)?;
    let mut rn = norm2(&r);
    for iter in 0..max_iter {
        if rn < tol {
            return Ok((x, rn));
        }
        let mut jac = vec![vec![0.0; n]; r.len()];
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += fd;
            xm[j] -= fd;
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            for i in 0..r.len() {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * fd);
            }
        }
        let step = solve_dense(jac, r.iter().map(|v| -v).collect())
            .ok_or(ScError::NoConvergence { iterations: iter, residual: rn })?;
        let tiny = step.iter().zip(&x).all(|(s, v)| s.abs() <= 1e-15 * (1.0 + v.abs()));
        let mut lam = 1.0;
        let mut accepted = false;
        let halvings = if rn < accept { 4 } else { 40 };
        for _ in 0..halvings {
            let xn: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + lam * s).collect();
            if let Ok(rr) = f(&xn) {
                let nn = norm2(&rr);
                if nn.is_finite() && nn < rn {
                    x = xn;
                    r = rr;
                    rn = nn;
                    accepted = true;
                    break;
                }
            }
            lam /= 2.0;
        }
        if !accepted || tiny {
            return if rn < accept { Ok((x, rn)) } else { Err(ScError::NoConvergence { iterations: iter, residual: rn }) };
        }
    }
    if rn < accept {
        Ok((x, rn))
    } else {
        Err(ScError::NoConvergence { iterations: max_iter, residual: rn })
    }
}

// ---------------------------------------------------------------- parameter problem

fn spacings_to_prevertices(u: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0, 1.0];
    for &s in u {
        let last = *w.last().unwrap();
        w.push(last + libm::exp(s));
    }
    w
}

fn polygon_residual(target_log: &[f64], reference: usize, w: &[f64], beta: &[f64]) -> Result<Vec<f64>, ScError> {
    let it = Integrator::new(w, beta);
    let lens: Vec<f64> = (0..w.len() - 1).map(|k| it.side(k, k + 1).map(|s| libm::log(s.norm()))).collect::<Result<_, _>>()?;
    Ok((0..lens.len())
        .filter(|&k| k != reference)
        .map(|k| (lens[k] - lens[reference]) - (target_log[k] - target_log[reference]))
        .collect())
}

/// Solves for the prevertices of a polygon. `vertices` are counterclockwise; the last one
/// goes to `∞` and the first two to `0` and `1`.
pub fn solve_polygon(
    vertices: &[C64],
    alpha: &[f64],
    labels: &[char],
    init: Option<&[f64]>,
) -> Result<SCHexagon, ScError> {
    let n = vertices.len();
    if n < 4 || alpha.len() != n || labels.len() != n {
        return Err(ScError::BadParameters);
    }
    let sides: Vec<f64> = (0..n - 2).map(|k| (vertices[k + 1] - vertices[k]).norm()).collect();
    if sides.iter().any(|&s| !(s > 0.0)) {
        return Err(ScError::BadParameters);
    }
    let target_log: Vec<f64> = sides.iter().map(|&s| libm::log(s)).collect();
    let reference = (0..sides.len()).max_by(|&a, &b| sides[a].total_cmp(&sides[b])).unwrap();
    let beta: Vec<f64> = alpha[..n - 1].iter().map(|a| a - 1.0).collect();
    let u0: Vec<f64> = match init {
        Some(w) => (1..w.len() - 1).map(|k| libm::log((w[k + 1] - w[k]) / (w[1] - w[0]))).collect(),
        None => (1..n - 2).map(|k| target_log[k] - target_log[0]).collect(),
    };
    let (u, _) = newton(
        u0,
        |u| polygon_residual(&target_log, reference, &spacings_to_prevertices(u), &beta),
        1e-14,
        1e-10,
        200,
        1e-7,
    )?;
    let w = spacings_to_prevertices(&u);
    let it = Integrator::new(&w, &beta);
    let raw = it.side(reference, reference + 1)?.norm();
    let dir = vertices[n - 1] - vertices[n - 2];
    let h = SCHexagon {
        prevertices: w,
        exponents: alpha.to_vec(),
        scale: sides[reference] / raw,
        direction: dir / dir.norm(),
        base: vertices[0],
        labels: labels.to_vec(),
    };
    let got = h.side_lengths()?;
    let worst = got.iter().zip(&sides).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(ScError::NoConvergence { iterations: 200, residual: worst });
    }
    Ok(h)
}

/// Vertices, angles and labels of the L-hexagon (or its degenerate forms), from `B`
/// counterclockwise with `A` last.
pub fn l_layout(h1: f64, h2: f64, q: f64) -> Result<(Vec<C64>, Vec<f64>, Vec<char>), ScError> {
    if !(h1 >= 0.0 && h2 > 0.0 && q > 0.0) || !(h1.is_finite() && h2.is_finite() && q.is_finite()) {
        return Err(ScError::BadParameters);
    }
    let c = |x: f64, y: f64| C64::new(x, y);
    let hh = h1 + h2;
    if h1 == 0.0 {
        if q >= 1.0 {
            return Err(ScError::BadParameters);
        }
        return Ok((
            vec![c(q, 0.0), c(1.0, 0.0), c(1.0, h2), c(0.0, h2), c(0.0, 0.0)],
            vec![1.0, 0.5, 0.5, 0.5, 0.5],
            vec!['M', 'D', 'E', 'F', 'A'],
        ));
    }
    if q == 1.0 {
        return Ok((
            vec![c(1.0, 0.0), c(1.0, h1), c(1.0, hh), c(0.0, hh), c(0.0, 0.0)],
            vec![0.5, 1.0, 0.5, 0.5, 0.5],
            vec!['B', 'M', 'E', 'F', 'A'],
        ));
    }
    let (ac, ad) = if q < 1.0 { (1.5, 0.5) } else { (0.5, 1.5) };
    Ok((
        vec![c(q, 0.0), c(q, h1), c(1.0, h1), c(1.0, hh), c(0.0, hh), c(0.0, 0.0)],
        vec![0.5, ac, ad, 0.5, 0.5, 0.5],
        vec!['B', 'C', 'D', 'E', 'F', 'A'],
    ))
}

/// SC data for the L-hexagon with rows `q × h₁` (bottom) and `1 × h₂` (top).
pub fn solve_hexagon(h1: f64, h2: f64, q: f64) -> Result<SCHexagon, ScError> {
    let (v, a, l) = l_layout(h1, h2, q)?;
    solve_polygon(&v, &a, &l, None)
}

/// As [`solve_hexagon`], starting from known prevertices.
pub fn solve_hexagon_from(h1: f64, h2: f64, q: f64, init: &[f64]) -> Result<SCHexagon, ScError> {
    let (v, a, l) = l_layout(h1, h2, q)?;
    if init.len() != v.len() - 1 {
        return solve_polygon(&v, &a, &l, None);
    }
    solve_polygon(&v, &a, &l, Some(init))
}

// ---------------------------------------------------------------- invariants

/// Point of the real projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RealPoint {
    Finite(f64),
    Infinity,
}

fn bracket(p: RealPoint, q: RealPoint) -> f64 {
    match (p, q) {
        (RealPoint::Finite(x), RealPoint::Finite(y)) => x - y,
        (RealPoint::Infinity, RealPoint::Finite(_)) => 1.0,
        (RealPoint::Finite(_), RealPoint::Infinity) => -1.0,
        (RealPoint::Infinity, RealPoint::Infinity) => 0.0,
    }
}

/// Image of `p` under the Möbius map sending `a, e, f` to `0, 1, ∞`.
pub fn normalize(a: RealPoint, e: RealPoint, f: RealPoint, p: RealPoint) -> f64 {
    bracket(p, a) * bracket(e, f) / (bracket(p, f) * bracket(e, a))
}

/// Cross-ratio `(a, b; c, d) = (a − c)(b − d) / ((a − d)(b − c))`.
pub fn cross_ratio(a: RealPoint, b: RealPoint, c: RealPoint, d: RealPoint) -> f64 {
    bracket(a, c) * bracket(b, d) / (bracket(a, d) * bracket(b, c))
}

/// Positions of the two remaining marked points after sending `A, E, F` to `0, 1, ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereFiveInvariants {
    pub x4: f64,
    pub x5: f64,
}

impl SphereFiveInvariants {
    pub fn distance(&self, o: &Self) -> f64 {
        (self.x4 - o.x4).abs().max((self.x5 - o.x5).abs())
    }
}

/// Marked points of the double: every vertex except the reflex one.
pub fn marked_prevertices(h: &SCHexagon) -> Vec<(char, RealPoint)> {
    let n = h.labels.len();
    (0..n)
        .filter(|&k| h.exponents[k] != 1.5)
        .map(|k| (h.labels[k], if k + 1 == n { RealPoint::Infinity } else { RealPoint::Finite(h.prevertices[k]) }))
        .collect()
}

pub fn invariants_of_hexagon(h: &SCHexagon) -> SphereFiveInvariants {
    let pts = marked_prevertices(h);
    let get = |c: char| pts.iter().find(|p| p.0 == c).map(|p| p.1).expect("label");
    let (a, e, f) = (get('A'), get('E'), get('F'));
    let mut rest: Vec<f64> = pts.iter().filter(|p| !matches!(p.0, 'A' | 'E' | 'F')).map(|p| normalize(a, e, f, p.1)).collect();
    rest.sort_by(f64::total_cmp);
    SphereFiveInvariants { x4: rest[0], x5: rest[1] }
}

struct Theta {
    q: f64,
}

impl Theta {
    fn series(&self, term: impl Fn(usize) -> f64) -> f64 {
        let mut s = 0.0;
        for n in 0..100_000 {
            let t = term(n);
            s += t;
            if t.abs() < 1e-18 * s.abs().max(1e-300) && n > 2 {
                break;
            }
        }
        s
    }
    fn pw(&self, e: f64) -> f64 {
        libm::exp(e * libm::log(self.q))
    }
    fn t2(&self) -> f64 {
        2.0 * self.series(|n| self.pw((n as f64 + 0.5) * (n as f64 + 0.5)))
    }
    fn t3(&self) -> f64 {
        1.0 + 2.0 * self.series(|n| self.pw(((n + 1) * (n + 1)) as f64))
    }
    fn t1v(&self, v: f64) -> f64 {
        2.0 * self.series(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s * self.pw((n as f64 + 0.5) * (n as f64 + 0.5)) * libm::sin((2 * n + 1) as f64 * v)
        })
    }
    fn t4v(&self, v: f64) -> f64 {
        1.0 + 2.0
            * self.series(|n| {
                let m = n + 1;
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                s * self.pw((m * m) as f64) * libm::cos(2.0 * m as f64 * v)
            })
    }
}

/// Double of the `1 × h₂` rectangle with a marked point on the bottom edge at `x = slit`.
///
/// Uses the closed-form map `w = sn(u, k)` of the rectangle `[−K, K] × [0, K']`, with
/// `k` and `sn` from theta series at nome `exp(−2π h₂)`.
pub fn invariants_of_slit_pillow(h2: f64, slit: f64) -> Result<SphereFiveInvariants, ScError> {
    if !(h2 > 0.0 && slit > 0.0 && slit < 1.0) {
        return Err(ScError::BadParameters);
    }
    let th = Theta { q: libm::exp(-2.0 * PI * h2) };
    let (t2, t3) = (th.t2(), th.t3());
    let k = (t2 / t3) * (t2 / t3);
    let v = PI * (slit - 0.5);
    let sn = (t3 / t2) * th.t1v(v) / th.t4v(v);
    let f = |x: f64| RealPoint::Finite(x);
    let (a, d, e, ff) = (f(-1.0), f(1.0), f(1.0 / k), f(-1.0 / k));
    let mut xs = [normalize(a, e, ff, f(sn)), normalize(a, e, ff, d)];
    xs.sort_by(f64::total_cmp);
    Ok(SphereFiveInvariants { x4: xs[0], x5: xs[1] })
}

/// Layout prevertices from normalized coordinates (`A, E, F = 0, 1, ∞`, `B = p`) under
/// `w = −1/y`, given the differences `w − w_B = (y − p)/(p y)`, rescaled so that the
/// first two are `0, 1`.
fn normalized_layout(diffs: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0];
    w.extend(diffs.iter().map(|d| d / diffs[0]));
    w
}

fn hexagon_from_prevertices(w: Vec<f64>, alpha: Vec<f64>, labels: Vec<char>, q: f64) -> Result<SCHexagon, ScError> {
    let mut h = SCHexagon {
        prevertices: w,
        exponents: alpha,
        scale: 1.0,
        direction: C64::new(0.0, -1.0),
        base: C64::new(q, 0.0),
        labels,
    };
    let e = h.labels.iter().position(|&c| c == 'E').unwrap();
    let raw = h.raw_sides()?;
    h.scale = 1.0 / raw[e].norm();
    Ok(h)
}

/// `(h₁, h₂)` from side lengths of a hexagon normalized so that `EF = 1`.
fn heights(h: &SCHexagon) -> Result<(f64, f64), ScError> {
    let s = h.side_lengths()?;
    let e = h.labels.iter().position(|&c| c == 'E').unwrap();
    let h2 = s[e - 1];
    let h1 = s[0];
    Ok((h1, h2))
}

/// L-hexagon (q ≤ 1) whose double has the given invariants, by a one-dimensional search for
/// the prevertex of the zero.
pub fn hexagon_with_invariants(q: f64, inv: &SphereFiveInvariants) -> Result<(f64, f64, SCHexagon), ScError> {
    if !(q > 0.0 && q <= 1.0 && 0.0 < inv.x4 && inv.x4 < inv.x5 && inv.x5 < 1.0) {
        return Err(ScError::BadParameters);
    }
    let (p, r) = (inv.x4, inv.x5);
    if q == 1.0 {
        let w = normalized_layout(&[(r - p) / (p * r), (1.0 - p) / p, 1.0 / p]);
        let h = hexagon_from_prevertices(w, vec![0.5, 1.0, 0.5, 0.5, 0.5], vec!['B', 'M', 'E', 'F', 'A'], q)?;
        let (h1, h2) = heights(&h)?;
        return Ok((h1, h2, h));
    }
    let build = |s: f64| -> Result<SCHexagon, ScError> {
        // c = (p + r e^s) / (1 + e^s)
        let es = libm::exp(s);
        let dc = (r - p) * es / (1.0 + es);
        let c = p + dc;
        let w = normalized_layout(&[dc / (p * c), (r - p) / (p * r), (1.0 - p) / p, 1.0 / p]);
        hexagon_from_prevertices(w, vec![0.5, 1.5, 0.5, 0.5, 0.5, 0.5], vec!['B', 'C', 'D', 'E', 'F', 'A'], q)
    };
    let resid = |s: f64| -> Result<f64, ScError> {
        let h = build(s)?;
        let sides = h.side_lengths()?;
        Ok(libm::log(sides[1]) - libm::log(1.0 - q))
    };
    // Grow a bracket outward from s = 0, then bisect.
    let f0 = resid(0.0)?;
    let dir = if f0 > 0.0 { 1.0 } else { -1.0 };
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut found = f0 == 0.0;
    let mut s0 = 0.0;
    for _ in 0..12 {
        let s1 = s0 + dir * 3.0;
        if resid(s1)?.signum() != f0.signum() {
            (lo, hi) = if dir < 0.0 { (s1, s0) } else { (s0, s1) };
            found = true;
            break;
        }
        s0 = s1;
    }
    if !found {
        return Err(ScError::NonPositiveSolution);
    }
    let flo = resid(lo)?;
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = (lo + hi) / 2.0;
        let fm = resid(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = build((lo + hi) / 2.0)?;
    let (h1, h2) = heights(&h)?;
    Ok((h1, h2, h))
}

/// `(h₁, h₂)` with the double of the L conformally equal to the collapsed pillowcase with
/// marked point at `q − t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuliMatch {
    pub h1: f64,
    pub h2: f64,
    pub residual: f64,
    pub hexagon: SCHexagon,
}

pub fn match_moduli(q: f64, t: f64) -> Result<ModuliMatch, ScError> {
    let target = invariants_of_slit_pillow(1.0, q - t)?;
    if !(q <= 1.0 && t > 0.0 && t < q) {
        return Err(ScError::BadParameters);
    }
    let (h1, h2, hex) = hexagon_with_invariants(q, &target)?;
    match_moduli_from(q, t, h1, h2, &hex.prevertices)
}

/// Two-dimensional damped Newton in `(ln h₁, ln h₂)` from the given start.
pub fn match_moduli_from(q: f64, t: f64, h1: f64, h2: f64, init: &[f64]) -> Result<ModuliMatch, ScError> {
    if !(h1 > 0.0 && h2 > 0.0) {
        return Err(ScError::NonPositiveSolution);
    }
    let target = invariants_of_slit_pillow(1.0, q - t)?;
    let init = init.to_vec();
    let f = |x: &[f64]| -> Result<Vec<f64>, ScError> {
        let h = solve_hexagon_from(libm::exp(x[0]), libm::exp(x[1]), q, &init)?;
        let inv = invariants_of_hexagon(&h);
        Ok(vec![inv.x4 - target.x4, inv.x5 - target.x5])
    };
    let (x, _) = newton(vec![libm::log(h1), libm::log(h2)], f, 1e-13, 1e-9, 60, 1e-6)?;
    let (h1, h2) = (libm::exp(x[0]), libm::exp(x[1]));
    if !(h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite()) {
        return Err(ScError::NonPositiveSolution);
    }
    let hexagon = solve_hexagon_from(h1, h2, q, &init)?;
    let residual = invariants_of_hexagon(&hexagon).distance(&target);
    if residual > 1e-8 {
        return Err(ScError::NoConvergence { iterations: 60, residual });
    }
    Ok(ModuliMatch { h1, h2, residual, hexagon })
}

// ---------------------------------------------------------------- asymptotics

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSample {
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    pub d: f64,
}

/// `D = a₁h₁ + a₂h₂ − a₂` with `a₁ = q/(1+q)`, `a₂ = 1/(1+q)`.
pub fn area_functional(q: f64, h1: f64, h2: f64) -> f64 {
    let a1 = q / (1.0 + q);
    let a2 = 1.0 / (1.0 + q);
    a1 * h1 + a2 * (h2 - 1.0)
}

pub fn path_sample(q: f64, t: f64) -> Result<PathSample, ScError> {
    let m = match_moduli(q, t)?;
    Ok(PathSample { t, h1: m.h1, h2: m.h2, d: area_functional(q, m.h1, m.h2) })
}

/// `per_decade` points per decade from `t_min` to `t_max`, inclusive.
pub fn log_grid(t_min: f64, t_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = libm::log10(t_max / t_min);
    let n = libm::round(decades * per_decade as f64) as usize;
    (0..=n).map(|i| t_min * libm::pow(10.0, decades * i as f64 / n.max(1) as f64)).collect()
}

pub fn default_t_samples() -> Vec<f64> {
    log_grid(1e-5, 1e-2, 20)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFit {
    /// Coefficient of `t / ln(1/t)`.
    pub c1: f64,
    /// Coefficient of `t² / ln(1/t)`.
    pub c2: f64,
    /// Relative RMS residual of the log model.
    pub residual: f64,
    /// Coefficients of `t, t², t³`.
    pub poly: [f64; 3],
    pub poly_residual: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
}

/// Householder least squares on column-scaled data.
pub fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = y.len();
    let n = cols.len();
    let scale: Vec<f64> = cols.iter().map(|c| norm2(c).max(1e-300)).collect();
    let mut a: Vec<Vec<f64>> = (0..m).map(|i| (0..n).map(|j| cols[j][i] / scale[j]).collect()).collect();
    let mut b = y.to_vec();
    for k in 0..n {
        let alpha = {
            let s = libm::sqrt((k..m).map(|i| a[i][k] * a[i][k]).sum());
            if a[k][k] > 0.0 { -s } else { s }
        };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|x| x * x).sum();
        if vn == 0.0 {
            continue;
        }
        for j in k..n {
            let d: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum::<f64>() * 2.0 / vn;
            for i in k..m {
                a[i][j] -= d * v[i - k];
            }
        }
        let d: f64 = (k..m).map(|i| v[i - k] * b[i]).sum::<f64>() * 2.0 / vn;
        for i in k..m {
            b[i] -= d * v[i - k];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().zip(&scale).map(|(v, s)| v / s).collect()
}

fn relative_rms(cols: &[Vec<f64>], coef: &[f64], y: &[f64]) -> f64 {
    let num: f64 = y
        .iter()
        .enumerate()
        .map(|(i, &yi)| {
            let fit: f64 = cols.iter().zip(coef).map(|(c, k)| c[i] * k).sum();
            (yi - fit) * (yi - fit)
        })
        .sum();
    let den: f64 = y.iter().map(|v| v * v).sum();
    libm::sqrt(num / den.max(1e-300))
}

/// Fits `D` against `{t/L, t²/L}` (`L = ln 1/t`) and against `{t, t², t³}`.
pub fn fit_samples(samples: &[PathSample]) -> AsymptoticFit {
    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.d).collect();
    let l: Vec<f64> = ts.iter().map(|&t| -libm::log(t)).collect();
    let log_cols = vec![
        ts.iter().zip(&l).map(|(t, l)| t / l).collect::<Vec<_>>(),
        ts.iter().zip(&l).map(|(t, l)| t * t / l).collect::<Vec<_>>(),
    ];
    let poly_cols = vec![ts.clone(), ts.iter().map(|t| t * t).collect(), ts.iter().map(|t| t * t * t).collect()];
    let c = least_squares(&log_cols, &y);
    let p = least_squares(&poly_cols, &y);
    AsymptoticFit {
        c1: c[0],
        c2: c[1],
        residual: relative_rms(&log_cols, &c, &y),
        poly: [p[0], p[1], p[2]],
        poly_residual: relative_rms(&poly_cols, &p, &y),
        t_min: ts.iter().cloned().fold(f64::INFINITY, f64::min),
        t_max: ts.iter().cloned().fold(0.0, f64::max),
        samples: ts.len(),
    }
}

pub fn asymptotic_fit(q: f64, t_samples: &[f64]) -> Result<AsymptoticFit, ScError> {
    let samples: Vec<PathSample> = t_samples.iter().map(|&t| path_sample(q, t)).collect::<Result<_, _>>()?;
    Ok(fit_samples(&samples))
}

/// The half of the samples with the smallest `t`.
pub fn lower_half(samples: &[PathSample]) -> Vec<PathSample> {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.t.total_cmp(&b.t));
    v.truncate((v.len() + 1) / 2);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_and_jacobi_moments() {
        let gl = gauss_legendre(NODES);
        let s: f64 = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| w * x.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-14);
        for b in [-0.5, 0.5] {
            let r = gauss_jacobi(NODES, 0.0, b);
            let m0: f64 = r.weights.iter().sum();
            let m2: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
            // ∫ (1+x)^b dx and ∫ x² (1+x)^b dx with y = 1 + x
            let p = |k: f64| libm::pow(2.0, b + k) / (b + k);
            assert!((m0 - p(1.0)).abs() < 1e-13, "{m0}");
            assert!((m2 - (p(3.0) - 2.0 * p(2.0) + p(1.0))).abs() < 1e-12);
        }
    }

    fn k_trapezoid(m: f64) -> f64 {
        let n = 4000;
        let h = PI / 2.0 / n as f64;
        let f = |th: f64| 1.0 / libm::sqrt(1.0 - m * libm::sin(th).powi(2));
        let mut s = 0.5 * (f(0.0) + f(PI / 2.0));
        for i in 1..n {
            s += f(i as f64 * h);
        }
        s * h
    }

    #[test]
    fn rectangle_ratio() {
        for x in [1.5, 2.0, 5.0] {
            let r = SCHexagon::rectangle(x);
            let s = r.side_lengths().unwrap();
            let want = k_trapezoid(1.0 - 1.0 / x) / k_trapezoid(1.0 / x);
            assert!((s[1] / s[0] - want).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn path_independence_and_vertex_limit() {
        let h = solve_hexagon(1.0, 1.0, 0.5).unwrap();
        let z = C64::new(0.7, 0.4);
        let a = h.sc_map_from(0, z).unwrap();
        let b = h.sc_map_from(3, z).unwrap();
        assert!((a - b).norm() < 1e-10, "{}", (a - b).norm());
        let imgs = h.vertex_images().unwrap();
        for k in 0..5 {
            let v = h.sc_map(C64::new(h.prevertices[k] + 1e-26, 1e-26)).unwrap();
            assert!((v - imgs[k]).norm() < 1e-8, "{k}");
        }
    }

    #[test]
    fn hexagon_solution_closes() {
        for (h1, h2, q) in [(1.0, 1.0, 0.5), (0.3, 2.0, 0.25), (1.0, 1.0, 2.0), (1.0, 1.0, 1.0), (0.0, 1.0, 0.5)] {
            let h = solve_hexagon(h1, h2, q).unwrap();
            let (v, _, _) = l_layout(h1, h2, q).unwrap();
            let imgs = h.vertex_images().unwrap();
            for (a, b) in imgs.iter().zip(&v) {
                assert!((a - b).norm() < 1e-9, "{h1} {h2} {q}: {a} {b}");
            }
            let inf = h.infinite_vertex().unwrap();
            assert!((inf - v[v.len() - 1]).norm() < 1e-8, "{inf}");
        }
    }

    #[test]
    fn symmetric_rectangle_with_midpoint() {
        let h = solve_hexagon(1.0, 1.0, 1.0).unwrap();
        let pts = marked_prevertices(&h);
        let g = |c: char| pts.iter().find(|p| p.0 == c).unwrap().1;
        let (a, b, m, e, f) = (g('A'), g('B'), g('M'), g('E'), g('F'));
        let l = cross_ratio(a, b, m, e);
        let r = cross_ratio(f, e, m, b);
        assert!((l - r).abs() < 1e-10, "{l} {r}");
    }

    #[test]
    fn invariants_are_mobius_invariant() {
        let h = solve_hexagon(0.7, 1.3, 0.4).unwrap();
        let inv = invariants_of_hexagon(&h);
        let mut g = h.clone();
        for w in g.prevertices.iter_mut() {
            *w = 3.0 * *w - 2.0;
        }
        let inv2 = invariants_of_hexagon(&g);
        assert!(inv.distance(&inv2) < 1e-12);
        assert!(0.0 < inv.x4 && inv.x4 < inv.x5 && inv.x5 < 1.0);
    }

    #[test]
    fn degenerate_hexagon_matches_slit_pillow() {
        for (h2, q) in [(1.0, 0.5), (0.7, 0.3), (2.0, 0.8)] {
            let h = solve_hexagon(0.0, h2, q).unwrap();
            let a = invariants_of_hexagon(&h);
            let b = invariants_of_slit_pillow(h2, q).unwrap();
            assert!(a.distance(&b) < 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn slit_midpoint_symmetric_and_monotone() {
        let inv = invariants_of_slit_pillow(1.0, 0.5).unwrap();
        let p = RealPoint::Finite;
        let (a, m, d, e, f) = (p(0.0), p(inv.x4), p(inv.x5), p(1.0), RealPoint::Infinity);
        assert!((cross_ratio(a, m, d, e) - cross_ratio(d, m, a, f)).abs() < 1e-12);
        let mut last = 0.0;
        for s in [0.01, 0.05, 0.1, 0.3, 0.6] {
            let x = invariants_of_slit_pillow(1.0, s).unwrap().x4;
            assert!(x > last);
            last = x;
        }
    }

    #[test]
    fn matching_round_trip() {
        let m = match_moduli(0.5, 0.05).unwrap();
        assert!(m.residual < 1e-8);
        assert!(m.h1 > 0.0 && m.h2 > 0.0);
        let other = match_moduli_from(0.5, 0.05, m.h1 * 1.3, m.h2 * 0.8, &m.hexagon.prevertices).unwrap();
        assert!((other.h1 - m.h1).abs() < 1e-7 && (other.h2 - m.h2).abs() < 1e-7);
    }

    #[test]
    fn continuity_in_h1() {
        let base = solve_hexagon(1.0, 1.0, 0.5).unwrap();
        let d = |h: f64| {
            let w = solve_hexagon(h, 1.0, 0.5).unwrap().prevertices;
            w.iter().zip(&base.prevertices).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let (d1, d2) = (d(1.0 - 1e-3), d(1.0 - 5e-4));
        assert!(d1 > 0.0 && (d1 / d2 - 2.0).abs() < 0.05, "{d1} {d2}");
    }

    #[test]
    fn path_endpoint() {
        let a = path_sample(0.5, 1e-4).unwrap();
        let b = path_sample(0.5, 1e-3).unwrap();
        assert!(a.h1 < b.h1 && a.h1 < 1e-4);
        assert!((a.h2 - 1.0).abs() < 1e-4);
        assert!(a.d.abs() < b.d.abs());
    }

    #[test]
    fn least_squares_recovers_exact_model() {
        let ts = log_grid(1e-4, 1e-2, 5);
        let samples: Vec<PathSample> = ts
            .iter()
            .map(|&t| PathSample { t, h1: 0.0, h2: 0.0, d: 0.3 * t / -libm::log(t) - 2.0 * t * t / -libm::log(t) })
            .collect();
        let f = fit_samples(&samples);
        assert!((f.c1 - 0.3).abs() < 1e-10 && (f.c2 + 2.0).abs() < 1e-8);
        assert!(f.residual < 1e-10 && f.poly_residual > f.residual);
    }
}
