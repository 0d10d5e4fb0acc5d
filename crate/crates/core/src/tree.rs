//! The Bruhat–Tits tree of PGL_2(Q_p).
//!
//! The vertex `(n, b)` is the homothety class of the lattice spanned by the columns of
//! `(p^-n b; 0 1)`. Equivalently it is the ball `b + p^-n Z_p`, so that `v_n = (n, 0)`
//! is the ball `p^-n Z_p`, the height is `h(n, b) = n`, the parent of a vertex is the
//! next larger ball, and its `p` children are its maximal proper sub-balls.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::arith::{ord_q, reduce_mod_pk, Q};
use crate::compact_open::{Ball, CompactOpen, Mat2};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    p: u64,
    n: i64,
    b: Q,
}

impl Vertex {
    pub fn new(p: u64, n: i64, b: &Q) -> Self {
        Vertex { p, n, b: reduce_mod_pk(b, p, -n) }
    }

    /// `v_n = [O + p^n O]`, the ball `p^-n Z_p`.
    pub fn standard(p: u64, n: i64) -> Self {
        Vertex::new(p, n, &Q::zero())
    }

    pub fn origin(p: u64) -> Self {
        Vertex::standard(p, 0)
    }

    pub fn from_ball(b: &Ball) -> Self {
        Vertex::new(b.p(), -b.radius(), b.center())
    }

    pub fn to_ball(&self) -> Ball {
        Ball::new(self.p, &self.b, -self.n)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    pub fn height(&self) -> i64 {
        self.n
    }

    pub fn parent(&self) -> Vertex {
        Vertex::new(self.p, self.n + 1, &self.b)
    }

    pub fn children(&self) -> Vec<Vertex> {
        self.to_ball().children().iter().map(Vertex::from_ball).collect()
    }

    pub fn neighbors(&self) -> Vec<Vertex> {
        let mut out = self.children();
        out.push(self.parent());
        out
    }

    pub fn is_child_of(&self, o: &Vertex) -> bool {
        self.n + 1 == o.n && self.parent() == *o
    }

    pub fn distance(&self, o: &Vertex) -> u64 {
        let (b1, b2) = (self.to_ball(), o.to_ball());
        let j = b1.join(&b2);
        ((b1.radius() - j.radius()) + (b2.radius() - j.radius())) as u64
    }

    /// The edges with origin `self`.
    pub fn out_edges(&self) -> Vec<Edge> {
        self.neighbors().into_iter().map(|t| Edge { o: self.clone(), t }).collect()
    }

    /// The edges with target `self`.
    pub fn in_edges(&self) -> Vec<Edge> {
        self.neighbors().into_iter().map(|o| Edge { o, t: self.clone() }).collect()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.b)
    }
}

/// An oriented edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    o: Vertex,
    t: Vertex,
}

impl Edge {
    pub fn new(o: Vertex, t: Vertex) -> Result<Self> {
        if o.distance(&t) != 1 {
            return Err(Error::InvalidArgument(format!("{o} and {t} are not adjacent")));
        }
        Ok(Edge { o, t })
    }

    /// The edge from the parent of `child` down to `child`.
    pub fn down_to(child: Vertex) -> Self {
        Edge { o: child.parent(), t: child }
    }

    /// `e_n`: origin `v_{n+1}`, target `v_n`, with `U(e_n) = p^-n Z_p`.
    pub fn standard(p: u64, n: i64) -> Self {
        Edge::down_to(Vertex::standard(p, n))
    }

    pub fn origin(&self) -> &Vertex {
        &self.o
    }

    pub fn target(&self) -> &Vertex {
        &self.t
    }

    pub fn reverse(&self) -> Edge {
        Edge { o: self.t.clone(), t: self.o.clone() }
    }

    /// Whether the edge points away from the end at infinity.
    pub fn is_down(&self) -> bool {
        self.t.is_child_of(&self.o)
    }

    /// The lower endpoint, which identifies the geometric edge.
    pub fn child(&self) -> &Vertex {
        if self.is_down() {
            &self.t
        } else {
            &self.o
        }
    }

    /// The set of ends `U(e)` of P^1 reached through `e`.
    pub fn ends(&self) -> CompactOpen {
        let ball = CompactOpen::ball(self.child().to_ball());
        if self.is_down() {
            ball
        } else {
            ball.complement()
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.o, self.t)
    }
}

/// `g [L] = [g L]`, re-normalized to `(n, b)` form by column reduction.
pub fn act_vertex(g: &Mat2, v: &Vertex) -> Result<Vertex> {
    let p = v.p;
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let s = crate::arith::pow_q(p, -v.n);
    let col1 = (&g.a * &s, &g.c * &s);
    let col2 = (&g.a * &v.b + &g.b, &g.c * &v.b + &g.d);
    let ord1 = ord_q(&col1.1, p).unwrap_or(i64::MAX);
    let ord2 = ord_q(&col2.1, p).unwrap_or(i64::MAX);
    let (other, pivot) = if ord2 <= ord1 { (col1, col2) } else { (col2, col1) };
    let (y, z) = pivot;
    let x = &other.0 - (&other.1 / &z) * &y;
    let xs = x / &z;
    let m = ord_q(&xs, p).expect("lattice has full rank");
    Ok(Vertex::new(p, -m, &(y / z)))
}

pub fn act_edge(g: &Mat2, e: &Edge) -> Result<Edge> {
    Ok(Edge { o: act_vertex(g, &e.o)?, t: act_vertex(g, &e.t)? })
}

/// All vertices within distance `r` of `center`, in breadth-first order.
pub fn ball_vertices(center: &Vertex, r: u64) -> Vec<Vertex> {
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(center.clone());
    queue.push_back((center.clone(), 0u64));
    while let Some((v, d)) = queue.pop_front() {
        order.push(v.clone());
        if d == r {
            continue;
        }
        for w in v.neighbors() {
            if seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    order
}

/// Geometric edges (as down-oriented edges) with both endpoints within distance `r`.
pub fn ball_edges(center: &Vertex, r: u64) -> Vec<Edge> {
    let verts = ball_vertices(center, r);
    let set: BTreeSet<&Vertex> = verts.iter().collect();
    verts
        .iter()
        .filter(|v| set.contains(&v.parent()))
        .map(|v| Edge::down_to(v.clone()))
        .collect()
}

/// `1 + (q + 1)(1 + q + ... + q^(r-1))`.
pub fn ball_vertex_count(q: u64, r: u64) -> u64 {
    1 + (q + 1) * (0..r).map(|k| q.pow(k as u32)).sum::<u64>()
}
