//! Functions on the vertices and edges of the tree, the maps between them, and the
//! spaces `B_a = C_c(V) / (T - a)` that model the Steinberg representation and its
//! unramified principal-series relatives.
//!
//! Edge functions are keyed by the lower endpoint of a geometric edge and store the
//! value on its downward orientation; the upward orientation carries `-c` for
//! `C^+` and `+c` for `C^-`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{ord_q, Q};
use crate::characters::psi_ball_integral;
use crate::compact_open::{BallFunction, Mat2, P1Function, P1Point};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tree::{act_edge, act_vertex, ball_edges, ball_vertices, Edge, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> Q {
        match self {
            Sign::Plus => Q::one(),
            Sign::Minus => -Q::one(),
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Some(Sign::Plus),
            "-" | "minus" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `tau_±(v) = (±1)^h(v)`.
pub fn tau(sign: Sign, v: &Vertex) -> Q {
    match sign {
        Sign::Plus => Q::one(),
        Sign::Minus if v.height().rem_euclid(2) == 0 => Q::one(),
        Sign::Minus => -Q::one(),
    }
}

/// `rho_alpha(v) = alpha^h(v)`.
pub fn rho(alpha: &Q, v: &Vertex) -> Q {
    alpha.pow(v.height() as i32)
}

/// `T(f)(v)` for a pointwise-defined `f`.
pub fn hecke_t_at(f: &dyn Fn(&Vertex) -> Q, v: &Vertex) -> Q {
    v.neighbors().iter().fold(Q::zero(), |acc, w| acc + f(w))
}

/// A finitely supported rational function on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    p: u64,
    vals: BTreeMap<Vertex, Q>,
}

impl VertexFunction {
    pub fn zero(p: u64) -> Self {
        VertexFunction { p, vals: BTreeMap::new() }
    }

    pub fn delta_at(v: &Vertex, x: Q) -> Self {
        let mut f = Self::zero(v.p());
        f.add_at(v, &x);
        f
    }

    pub fn from_pairs(p: u64, pairs: impl IntoIterator<Item = (Vertex, Q)>) -> Self {
        let mut f = Self::zero(p);
        for (v, x) in pairs {
            f.add_at(&v, &x);
        }
        f
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, v: &Vertex) -> Q {
        self.vals.get(v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_at(&mut self, v: &Vertex, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.vals.entry(v.clone()).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.vals.remove(v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vertex, &Q)> {
        self.vals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (v, x) in &o.vals {
            out.add_at(v, x);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, x: &Q) -> Self {
        if x.is_zero() {
            return Self::zero(self.p);
        }
        VertexFunction { p: self.p, vals: self.vals.iter().map(|(v, y)| (v.clone(), y * x)).collect() }
    }

    /// Pointwise product with `w`.
    pub fn weighted(&self, w: &dyn Fn(&Vertex) -> Q) -> Self {
        Self::from_pairs(self.p, self.vals.iter().map(|(v, x)| (v.clone(), x * w(v))))
    }

    /// `<f, g> = sum_v f(v) g(v)`.
    pub fn pair(&self, o: &Self) -> Q {
        self.vals.iter().fold(Q::zero(), |acc, (v, x)| acc + x * o.get(v))
    }

    /// Pairing with a pointwise-defined function, which need not have finite support.
    pub fn pair_fn(&self, g: &dyn Fn(&Vertex) -> Q) -> Q {
        self.vals.iter().fold(Q::zero(), |acc, (v, x)| acc + x * g(v))
    }

    pub fn pair_tau(&self, sign: Sign) -> Q {
        self.pair_fn(&|v| tau(sign, v))
    }

    /// `(g f)(v) = f(g^-1 v)`.
    pub fn act(&self, g: &Mat2) -> Result<Self> {
        let mut out = Self::zero(self.p);
        for (v, x) in &self.vals {
            out.add_at(&act_vertex(g, v)?, x);
        }
        Ok(out)
    }

    /// `T f(v) = sum_{w ~ v} f(w)`.
    pub fn hecke_t(&self) -> Self {
        let mut out = Self::zero(self.p);
        for (v, x) in &self.vals {
            for w in v.neighbors() {
                out.add_at(&w, x);
            }
        }
        out
    }

    /// `(T - a) f`.
    pub fn t_minus(&self, a: &Q) -> Self {
        self.hecke_t().sub(&self.scale(a))
    }

    /// Twist by `tau_-`, which carries `B_a` to `B_-a`.
    pub fn twist(&self) -> Self {
        self.weighted(&|v| tau(Sign::Minus, v))
    }

    /// Largest distance from `v_0` to the support, or `None` for the zero function.
    pub fn radius(&self) -> Option<u64> {
        let o = Vertex::origin(self.p);
        self.vals.keys().map(|v| v.distance(&o)).max()
    }
}

impl fmt::Display for VertexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vals.iter().map(|(v, x)| format!("{v}: {x}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A finitely supported function on oriented edges in `C^+` or `C^-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFunction {
    p: u64,
    sign: Sign,
    vals: BTreeMap<Vertex, Q>,
}

impl EdgeFunction {
    pub fn zero(p: u64, sign: Sign) -> Self {
        EdgeFunction { p, sign, vals: BTreeMap::new() }
    }

    /// The function with `c(e) = x`, `c(reverse e) = ∓x`, and zero elsewhere.
    pub fn on_edge(e: &Edge, x: Q, sign: Sign) -> Self {
        let mut c = Self::zero(e.origin().p(), sign);
        c.add_on(e, &x);
        c
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Orientation factor: `c(up) = flip * c(down)`.
    fn flip(&self) -> Q {
        -self.sign.value()
    }

    fn add_key(&mut self, w: &Vertex, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.vals.entry(w.clone()).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.vals.remove(w);
        }
    }

    /// Adds `x` to `c(e)`, adjusting the reverse orientation accordingly.
    pub fn add_on(&mut self, e: &Edge, x: &Q) {
        if e.is_down() {
            self.add_key(e.target(), x);
        } else {
            let y = x * self.flip();
            self.add_key(e.origin(), &y);
        }
    }

    pub fn get(&self, e: &Edge) -> Q {
        let x = self.vals.get(e.child()).cloned().unwrap_or_else(Q::zero);
        if e.is_down() {
            x
        } else {
            x * self.flip()
        }
    }

    /// Values on downward edges, keyed by lower endpoint.
    pub fn down_values(&self) -> impl Iterator<Item = (&Vertex, &Q)> {
        self.vals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.sign, o.sign, "mixed edge-function signs");
        let mut out = self.clone();
        for (w, x) in &o.vals {
            out.add_key(w, x);
        }
        out
    }

    pub fn scale(&self, x: &Q) -> Self {
        let mut out = Self::zero(self.p, self.sign);
        for (w, y) in &self.vals {
            out.add_key(w, &(y * x));
        }
        out
    }

    /// Sum over geometric edges of `c1(e) c2(e)`, which does not depend on orientation.
    pub fn pair(&self, o: &Self) -> Q {
        self.vals.iter().fold(Q::zero(), |acc, (w, x)| acc + x * o.vals.get(w).cloned().unwrap_or_else(Q::zero))
    }

    /// `(g c)(e) = c(g^-1 e)`.
    pub fn act(&self, g: &Mat2) -> Result<Self> {
        let mut out = Self::zero(self.p, self.sign);
        for (w, x) in &self.vals {
            out.add_on(&act_edge(g, &Edge::down_to(w.clone()))?, x);
        }
        Ok(out)
    }

    /// `sum_e c(e) 1_{U(e)}` over downward edges; for `C^+` this is a well-defined class
    /// in `C^0(P^1) / constants`, represented with value 0 at infinity.
    pub fn to_p1_function(&self) -> P1Function {
        let terms = self.vals.iter().map(|(w, x)| (w.to_ball(), x.clone())).collect();
        P1Function { constant: Q::zero(), finite: BallFunction::from_terms(self.p, terms) }
    }

    /// The `C^+` function whose `sum_e c(e) 1_{U(e)}` is `f`.
    pub fn from_ball_function(f: &BallFunction<Q>) -> Self {
        let mut c = Self::zero(f.p(), Sign::Plus);
        for (b, x) in f.canonical() {
            c.add_key(&Vertex::from_ball(&b), &x);
        }
        c
    }
}

/// `delta(c)(v) = sum_{t(e) = v} c(e)`.
pub fn delta(c: &EdgeFunction) -> VertexFunction {
    let mut out = VertexFunction::zero(c.p);
    let flip = c.flip();
    for (w, x) in &c.vals {
        out.add_at(w, x);
        out.add_at(&w.parent(), &(x * &flip));
    }
    out
}

/// `delta*_±(phi)(e) = phi(t(e)) ∓ phi(o(e))`.
pub fn delta_star(phi: &VertexFunction, sign: Sign) -> EdgeFunction {
    let mut keys: BTreeSet<Vertex> = BTreeSet::new();
    for v in phi.vals.keys() {
        keys.insert(v.clone());
        keys.extend(v.children());
    }
    let s = sign.value();
    let mut out = EdgeFunction::zero(phi.p, sign);
    for w in keys {
        let x = phi.get(&w) - &s * phi.get(&w.parent());
        out.add_key(&w, &x);
    }
    out
}

/// `delta~_rho(c)(v) = sum_{t(e) = v} rho(o(e)) c(e)` for `c` in `C^+`.
pub fn tilde_delta_lower(rho_fn: &dyn Fn(&Vertex) -> Q, c: &EdgeFunction) -> Result<VertexFunction> {
    if c.sign != Sign::Plus {
        return Err(Error::InvalidArgument("delta~_rho is defined on C^+".into()));
    }
    let mut out = VertexFunction::zero(c.p);
    for (w, x) in &c.vals {
        let par = w.parent();
        // Down edge parent -> w, then up edge w -> parent carrying -x.
        out.add_at(w, &(x * rho_fn(&par)));
        out.add_at(&par, &(-(x * rho_fn(w))));
    }
    Ok(out)
}

/// `delta~^rho(phi)(e) = rho(o(e)) phi(t(e)) - rho(t(e)) phi(o(e))`, an element of `C^+`.
pub fn tilde_delta_upper(rho_fn: &dyn Fn(&Vertex) -> Q, phi: &VertexFunction) -> EdgeFunction {
    let mut keys: BTreeSet<Vertex> = BTreeSet::new();
    for v in phi.vals.keys() {
        keys.insert(v.clone());
        keys.extend(v.children());
    }
    let mut out = EdgeFunction::zero(phi.p, Sign::Plus);
    for w in keys {
        let par = w.parent();
        let x = rho_fn(&par) * phi.get(&w) - rho_fn(&w) * phi.get(&par);
        out.add_key(&w, &x);
    }
    out
}

/// `delta_alpha(f)`: extend `chi_alpha f` by zero to P^1, read it as an element of `C^+`,
/// and apply `delta~_alpha`. Unless `alpha = 1` the support of `f` must avoid 0.
pub fn delta_alpha(f: &BallFunction<Q>, alpha: &Q) -> Result<VertexFunction> {
    if alpha.is_zero() {
        return Err(Error::ZeroInput("alpha"));
    }
    let p = f.p();
    let mut twisted = BallFunction::zero(p);
    for (b, x) in f.canonical() {
        if alpha.is_one() {
            twisted.push(b, x);
            continue;
        }
        if !b.avoids_zero() {
            return Err(Error::InvalidArgument(format!("support meets 0 at {b}; need f in C_c(F^*)")));
        }
        let v = ord_q(b.center(), p).expect("ball avoids 0");
        twisted.push(b, x * alpha.pow(v as i32));
    }
    let c = EdgeFunction::from_ball_function(&twisted);
    let a = alpha.clone();
    tilde_delta_lower(&move |v: &Vertex| rho(&a, v), &c)
}

/// Solves `delta~_alpha(c) = phi` for a finitely supported `c` in `C^+`, if one exists.
/// The solution is unique when it exists.
pub fn solve_tilde_delta(phi: &VertexFunction, alpha: &Q) -> Option<EdgeFunction> {
    let p = phi.p;
    let mut out = EdgeFunction::zero(p, Sign::Plus);
    if phi.is_zero() {
        return Some(out);
    }
    let top = phi
        .vals
        .keys()
        .map(|v| v.to_ball())
        .reduce(|a, b| a.join(&b))
        .map(|b| Vertex::from_ball(&b))
        .expect("nonempty support");
    let mut hull: BTreeSet<Vertex> = BTreeSet::new();
    for v in phi.vals.keys() {
        let mut u = v.clone();
        while u.height() <= top.height() {
            if !hull.insert(u.clone()) {
                break;
            }
            u = u.parent();
        }
    }
    let mut order: Vec<Vertex> = hull.into_iter().collect();
    order.sort_by_key(|v| v.height());
    let mut vals: BTreeMap<Vertex, Q> = BTreeMap::new();
    for v in &order {
        let n = v.height() as i32;
        let below = v.children().iter().filter_map(|w| vals.get(w)).fold(Q::zero(), |acc, x| acc + x);
        let x = (phi.get(v) + alpha.pow(n - 1) * below) / alpha.pow(n + 1);
        vals.insert(v.clone(), x);
    }
    if !vals[&top].is_zero() {
        return None;
    }
    for (w, x) in vals {
        out.add_key(&w, &x);
    }
    Some(out)
}

/// Outcome of testing whether `phi` lies in the image of `T - a` on `C_c(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(VertexFunction),
    NonMember,
    /// The search radius is too small to decide.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub outcome: Membership,
    /// `<phi, tau_±>` when `a = ±(q + 1)`; it must vanish on the image.
    pub tau_pairing: Option<Q>,
}

/// Decides `phi ∈ (T - a) C_c(V)` by solving for a preimage supported within distance
/// `r` of `v_0`. Any preimage is supported within `radius(phi) - 1`, so the answer is
/// conclusive once `r` reaches that.
pub fn in_image_t_minus_a(phi: &VertexFunction, a: &Q, r: u64) -> MembershipReport {
    let p = phi.p;
    let q1 = Q::from_integer((p + 1).into());
    let tau_pairing = if *a == q1 {
        Some(phi.pair_tau(Sign::Plus))
    } else if *a == -q1 {
        Some(phi.pair_tau(Sign::Minus))
    } else {
        None
    };
    let outcome = match phi.radius() {
        None => Membership::Member(VertexFunction::zero(p)),
        Some(rad) if rad > r + 1 => Membership::Inconclusive,
        Some(_) => peel(phi, a, r),
    };
    MembershipReport { outcome, tau_pairing }
}

/// Breadth-first layers around `v_0` with the inward neighbor of each vertex.
fn layers(p: u64, depth: u64) -> (Vec<Vec<Vertex>>, BTreeMap<Vertex, Vertex>) {
    let o = Vertex::origin(p);
    let mut inner: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut seen: BTreeSet<Vertex> = BTreeSet::from([o.clone()]);
    let mut out = vec![vec![o]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in out.last().expect("nonempty") {
            for w in v.neighbors() {
                if seen.insert(w.clone()) {
                    inner.insert(w.clone(), v.clone());
                    next.push(w);
                }
            }
        }
        out.push(next);
    }
    (out, inner)
}

fn peel(phi: &VertexFunction, a: &Q, r: u64) -> Membership {
    let p = phi.p;
    let (layers, inner) = layers(p, r + 1);
    let mut psi: BTreeMap<Vertex, Q> = BTreeMap::new();
    let get = |m: &BTreeMap<Vertex, Q>, v: &Vertex| m.get(v).cloned().unwrap_or_else(Q::zero);
    for d in (1..=(r as usize + 1)).rev() {
        let mut proposed: BTreeMap<Vertex, Q> = BTreeMap::new();
        for u in &layers[d] {
            let inw = &inner[u];
            let outer = u.neighbors().into_iter().filter(|x| x != inw).fold(Q::zero(), |acc, x| acc + get(&psi, &x));
            let val = phi.get(u) - outer + a * get(&psi, u);
            match proposed.get(inw) {
                Some(prev) if *prev != val => return Membership::NonMember,
                Some(_) => {}
                None => {
                    proposed.insert(inw.clone(), val);
                }
            }
        }
        for (v, x) in proposed {
            if !x.is_zero() {
                psi.insert(v, x);
            }
        }
    }
    let o = &layers[0][0];
    let at_origin = o.neighbors().iter().fold(Q::zero(), |acc, x| acc + get(&psi, x)) - a * get(&psi, o);
    if at_origin != phi.get(o) {
        return Membership::NonMember;
    }
    let psi = VertexFunction::from_pairs(p, psi);
    debug_assert_eq!(psi.t_minus(a), *phi);
    Membership::Member(psi)
}

/// Whether `phi1` and `phi2` define the same class in `B_a`.
pub fn same_class(phi1: &VertexFunction, phi2: &VertexFunction, a: &Q, r: u64) -> Membership {
    in_image_t_minus_a(&phi1.sub(phi2), a, r).outcome
}

/// `Lambda(phi) = int (phi([x:1]) - phi(infinity)) psi(x) dx`, the Whittaker functional
/// on `C^0(P^1) / constants`.
pub fn whittaker_steinberg(phi: &P1Function) -> Cyclotomic {
    phi.finite.terms().iter().fold(Cyclotomic::zero(), |acc, (b, x)| acc.add(&psi_ball_integral(b).scale(x)))
}

/// The Whittaker functional on `B_a` for `alpha = ±1`, normalized so that it is
/// `Lambda` after `delta~_alpha`. Requires `<phi, rho_alpha> = 0`, which every class
/// in `B_a` admits.
pub fn whittaker_on_class(phi: &VertexFunction, alpha: &Q) -> Result<Cyclotomic> {
    if !(alpha.is_one() || *alpha == -Q::one()) {
        return Err(Error::InvalidArgument("only alpha = ±1 is supported".into()));
    }
    let c = solve_tilde_delta(phi, alpha)
        .ok_or_else(|| Error::InvalidArgument("representative does not pair to 0 with rho".into()))?;
    Ok(whittaker_steinberg(&c.to_p1_function()))
}

/// A harmonic cocycle on the edges within distance `radius` of `v_0`.
#[derive(Clone, Debug)]
pub struct HarmonicCocycle {
    p: u64,
    radius: u64,
    vals: BTreeMap<Vertex, Q>,
}

impl HarmonicCocycle {
    /// Values `c(down edge to w)` from `f`, for every geometric edge inside the ball.
    pub fn from_fn(p: u64, radius: u64, f: &dyn Fn(&Edge) -> Q) -> Self {
        let vals = ball_edges(&Vertex::origin(p), radius)
            .into_iter()
            .map(|e| {
                let x = f(&e);
                (e.target().clone(), x)
            })
            .collect();
        HarmonicCocycle { p, radius, vals }
    }

    /// The cocycle `c(e) = mu(U(e))` of a finite point measure of total mass 0.
    pub fn from_point_masses(p: u64, radius: u64, masses: &[(P1Point, Q)]) -> Result<Self> {
        let total = masses.iter().fold(Q::zero(), |acc, (_, m)| acc + m);
        if !total.is_zero() {
            return Err(Error::InvalidArgument("point masses must sum to 0".into()));
        }
        Ok(Self::from_fn(p, radius, &|e: &Edge| {
            let u = e.ends();
            masses.iter().filter(|(x, _)| u.contains(x)).fold(Q::zero(), |acc, (_, m)| acc + m)
        }))
    }

    /// `delta~^rho(lambda)` restricted to the ball; harmonic when `rho`, `lambda` are
    /// eigenfunctions of `T` with the same eigenvalue.
    pub fn from_eigenfunctions(
        p: u64,
        radius: u64,
        rho_fn: &dyn Fn(&Vertex) -> Q,
        lambda: &dyn Fn(&Vertex) -> Q,
    ) -> Self {
        Self::from_fn(p, radius, &|e: &Edge| rho_fn(e.origin()) * lambda(e.target()) - rho_fn(e.target()) * lambda(e.origin()))
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn value(&self, e: &Edge) -> Result<Q> {
        let x = self.vals.get(e.child()).ok_or(Error::OutsideCertificate { radius: self.radius as u32 })?;
        Ok(if e.is_down() { x.clone() } else { -x })
    }

    /// Checks `sum_{o(e) = v} c(e) = 0` at every vertex strictly inside the ball.
    pub fn check_harmonic(&self) -> bool {
        ball_vertices(&Vertex::origin(self.p), self.radius.saturating_sub(1)).iter().all(|v| {
            v.out_edges().iter().try_fold(Q::zero(), |acc, e| self.value(e).map(|x| acc + x)).is_ok_and(|s| s.is_zero())
        })
    }

    /// `mu_c(U)` for a compact open `U`, decomposed into sets `U(e)` inside the certificate.
    pub fn boundary_distribution(&self, u: &crate::compact_open::CompactOpen) -> Result<Q> {
        let mut total = Q::zero();
        for b in u.balls() {
            total += self.value(&Edge::down_to(Vertex::from_ball(b)))?;
        }
        Ok(if u.is_cofinite() { -total } else { total })
    }
}

/// Whether `delta` on edges inside the ball of radius `r` has rank `|V_r| - 1` with image
/// orthogonal to `tau_±`, so the image is exactly `Ker <., tau_±>` there.
pub fn check_delta_image(p: u64, r: u64, sign: Sign) -> bool {
    let o = Vertex::origin(p);
    let verts = ball_vertices(&o, r);
    let index: BTreeMap<&Vertex, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges = ball_edges(&o, r);
    let mut mat = vec![vec![0i64; edges.len()]; verts.len()];
    for (j, e) in edges.iter().enumerate() {
        let img = delta(&EdgeFunction::on_edge(e, Q::one(), sign));
        if !img.pair_tau(sign).is_zero() {
            return false;
        }
        for (v, x) in img.support() {
            let Some(&i) = index.get(v) else { return false };
            mat[i][j] = crate::arith::to_f64(x) as i64;
        }
    }
    linalg::rank_mod(&mat, 1_000_000_007) + 1 == verts.len()
}

/// Whether `delta*_±` is injective on functions supported in the ball of radius `r`.
pub fn check_delta_star_injective(p: u64, r: u64, sign: Sign) -> bool {
    let o = Vertex::origin(p);
    let verts = ball_vertices(&o, r);
    let edges = ball_edges(&o, r + 1);
    let index: BTreeMap<&Vertex, usize> = edges.iter().enumerate().map(|(i, e)| (e.target(), i)).collect();
    let mut mat = vec![vec![0i64; verts.len()]; edges.len()];
    for (j, v) in verts.iter().enumerate() {
        let img = delta_star(&VertexFunction::delta_at(v, Q::one()), sign);
        for (w, x) in img.down_values() {
            mat[index[w]][j] = crate::arith::to_f64(x) as i64;
        }
    }
    linalg::rank_mod(&mat, 1_000_000_007) == verts.len()
}

/// Random finitely supported vertex function within distance `r` of `v_0`.
pub fn random_vertex_function<R: rand::Rng>(p: u64, r: u64, terms: usize, rng: &mut R) -> VertexFunction {
    let verts = ball_vertices(&Vertex::origin(p), r);
    VertexFunction::from_pairs(
        p,
        (0..terms).map(|_| (verts[rng.gen_range(0..verts.len())].clone(), Q::from_integer(rng.gen_range(-5i64..=5).into()))),
    )
}

/// Random `C^±` function on edges within distance `r` of `v_0`.
pub fn random_edge_function<R: rand::Rng>(p: u64, r: u64, sign: Sign, terms: usize, rng: &mut R) -> EdgeFunction {
    let edges = ball_edges(&Vertex::origin(p), r);
    let mut c = EdgeFunction::zero(p, sign);
    for _ in 0..terms {
        let mut e = edges[rng.gen_range(0..edges.len())].clone();
        if rng.gen_bool(0.5) {
            e = e.reverse();
        }
        c.add_on(&e, &Q::from_integer(rng.gen_range(-5i64..=5).into()));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};
    use crate::compact_open::Ball;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_delta_star_is_q_plus_one_minus_sign_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3] {
            let q1 = q(p as i64 + 1);
            for _ in 0..20 {
                let phi = random_vertex_function(p, 2, 4, &mut rng);
                let plus = delta(&delta_star(&phi, Sign::Plus));
                assert_eq!(plus, phi.scale(&q1).sub(&phi.hecke_t()));
                let minus = delta(&delta_star(&phi, Sign::Minus));
                assert_eq!(minus, phi.scale(&q1).add(&phi.hecke_t()));
            }
        }
    }

    #[test]
    fn adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for sign in [Sign::Plus, Sign::Minus] {
            for _ in 0..20 {
                let c = random_edge_function(3, 2, sign, 5, &mut rng);
                let phi = random_vertex_function(3, 3, 5, &mut rng);
                assert_eq!(delta(&c).pair(&phi), c.pair(&delta_star(&phi, sign)));
            }
        }
    }

    #[test]
    fn delta_tau_and_rank() {
        for p in [2u64, 3] {
            for r in 1..=3 {
                for sign in [Sign::Plus, Sign::Minus] {
                    assert!(check_delta_image(p, r, sign));
                    assert!(check_delta_star_injective(p, r, sign));
                }
            }
        }
    }

    #[test]
    fn membership_by_peeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = 3;
        let a = q(4);
        for _ in 0..10 {
            let psi = random_vertex_function(p, 2, 3, &mut rng);
            let phi = psi.t_minus(&a);
            match in_image_t_minus_a(&phi, &a, 3).outcome {
                Membership::Member(found) => assert_eq!(found, psi),
                other => panic!("expected member, got {other:?}"),
            }
        }
        let single = VertexFunction::delta_at(&Vertex::origin(p), q(1));
        let rep = in_image_t_minus_a(&single, &a, 2);
        assert_eq!(rep.outcome, Membership::NonMember);
        assert_eq!(rep.tau_pairing, Some(q(1)));
        let far = VertexFunction::delta_at(&Vertex::standard(p, 5), q(1));
        assert_eq!(in_image_t_minus_a(&far, &a, 2).outcome, Membership::Inconclusive);
    }

    #[test]
    fn delta_star_plus_lands_in_image_after_tilde_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for alpha in [q(1), q(-1), q(2)] {
            let p = 3;
            let a = &alpha + Q::from_integer(p.into()) / &alpha;
            let rf = |v: &Vertex| rho(&alpha, v);
            for _ in 0..5 {
                let phi = random_vertex_function(p as u64, 2, 3, &mut rng);
                let lhs = tilde_delta_lower(&rf, &delta_star(&phi, Sign::Plus)).unwrap();
                assert_eq!(lhs, phi.weighted(&rf).t_minus(&a).neg());
            }
        }
    }

    #[test]
    fn delta_alpha_pairs_to_zero_with_rho() {
        let p = 5;
        let f = BallFunction::from_terms(p, vec![(Ball::new(p, &q(1), 1), q(2)), (Ball::new(p, &qfrac(2, 5), 0), q(-3))]);
        for alpha in [q(2), q(-1), qfrac(1, 3)] {
            let img = delta_alpha(&f, &alpha).unwrap();
            assert!(img.pair_fn(&|v| rho(&alpha, v)).is_zero());
        }
        let bad = BallFunction::indicator(Ball::zp(p), q(1));
        assert!(delta_alpha(&bad, &q(2)).is_err());
        assert!(delta_alpha(&bad, &q(1)).is_ok());
    }

    #[test]
    fn solve_inverts_tilde_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in [q(1), q(-1), q(3)] {
            let rf = |v: &Vertex| rho(&alpha, v);
            for _ in 0..10 {
                let c = random_edge_function(2, 3, Sign::Plus, 4, &mut rng);
                let phi = tilde_delta_lower(&rf, &c).unwrap();
                assert_eq!(solve_tilde_delta(&phi, &alpha).unwrap(), c);
            }
        }
        assert!(solve_tilde_delta(&VertexFunction::delta_at(&Vertex::origin(2), q(1)), &q(1)).is_none());
    }

    #[test]
    fn whittaker_examples() {
        let p = 3;
        let wide = P1Function::indicator(&crate::compact_open::CompactOpen::ball(Ball::new(p, &q(0), -1)));
        assert!(whittaker_steinberg(&wide).is_zero());
        let zp = P1Function::indicator(&crate::compact_open::CompactOpen::ball(Ball::zp(p)));
        assert_eq!(whittaker_steinberg(&zp), Cyclotomic::one());
    }

    #[test]
    fn harmonic_from_point_masses() {
        let p = 2;
        let masses = vec![
            (P1Point::Finite(q(0)), q(2)),
            (P1Point::Finite(qfrac(1, 2)), q(-3)),
            (P1Point::Infinity, q(1)),
        ];
        let c = HarmonicCocycle::from_point_masses(p, 3, &masses).unwrap();
        assert!(c.check_harmonic());
        let u = crate::compact_open::CompactOpen::ball(Ball::zp(p));
        assert_eq!(c.boundary_distribution(&u).unwrap(), q(2));
        assert_eq!(c.boundary_distribution(&u.complement()).unwrap(), q(-2));
        let deep = crate::compact_open::CompactOpen::ball(Ball::new(p, &q(0), 9));
        assert!(matches!(c.boundary_distribution(&deep), Err(Error::OutsideCertificate { .. })));
    }

    #[test]
    fn eigenfunction_cocycle_is_harmonic() {
        let p = 3u64;
        // alpha and q / alpha share the eigenvalue alpha + q / alpha.
        let alpha = q(2);
        let beta = qfrac(3, 2);
        let c = HarmonicCocycle::from_eigenfunctions(p, 3, &|v| rho(&alpha, v), &|v| rho(&beta, v));
        assert!(c.check_harmonic());
        let bad = HarmonicCocycle::from_eigenfunctions(p, 3, &|v| rho(&alpha, v), &|v| rho(&q(5), v));
        assert!(!bad.check_harmonic());
    }
}
