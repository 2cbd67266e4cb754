//! Small fixed-size linear algebra for the plane plus `libm` wrappers.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub const PI: f64 = core::f64::consts::PI;
pub const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}
#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}
#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}
#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `x^n` by repeated squaring; exact for small integer exponents.
pub fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut e = n;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let mut r = a - TAU * floor((a + PI) / TAU);
    if r <= -PI {
        r += TAU;
    }
    if r > PI {
        r -= TAU;
    }
    r
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_tau(a: f64) -> f64 {
    let r = a - TAU * floor(a / TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Point or vector in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn polar(r: f64, angle: f64) -> Self {
        Vec2::new(r * cos(angle), r * sin(angle))
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn angle(self) -> f64 {
        atan2(self.y, self.x)
    }

    /// Counter-clockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Lexicographic comparison, used for deterministic tie-breaks.
    pub fn lex_cmp(self, o: Vec2) -> core::cmp::Ordering {
        self.x
            .total_cmp(&o.x)
            .then_with(|| self.y.total_cmp(&o.y))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}
impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}
impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}
impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}
impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}
impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}
impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}
impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// General 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_cols(c0: Vec2, c1: Vec2) -> Self {
        Mat2::new(c0.x, c1.x, c0.y, c1.y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    pub fn frobenius(&self) -> f64 {
        sqrt(self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d)
    }

    /// Smallest singular value.
    pub fn min_singular(&self) -> f64 {
        let ata = Sym2::new(
            self.a * self.a + self.c * self.c,
            self.a * self.b + self.c * self.d,
            self.b * self.b + self.d * self.d,
        );
        let (lo, _) = ata.eigenvalues();
        sqrt(lo.max(0.0))
    }
}

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 {
        xx: 0.0,
        xy: 0.0,
        yy: 0.0,
    };
    pub const IDENTITY: Sym2 = Sym2 {
        xx: 1.0,
        xy: 0.0,
        yy: 1.0,
    };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Sym2::new(a, 0.0, b)
    }

    /// `s · u uᵀ`
    pub fn outer(u: Vec2, s: f64) -> Self {
        Sym2::new(s * u.x * u.x, s * u.x * u.y, s * u.y * u.y)
    }

    /// `s · (u vᵀ + v uᵀ)`
    pub fn sym_outer(u: Vec2, v: Vec2, s: f64) -> Self {
        Sym2::new(2.0 * s * u.x * v.x, s * (u.x * v.y + u.y * v.x), 2.0 * s * u.y * v.y)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.xx * self.xx + 2.0 * self.xy * self.xy + self.yy * self.yy
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    pub fn quad(&self, v: Vec2) -> f64 {
        v.dot(self.mul_vec(v))
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2::new(self.xx * s, self.xy * s, self.yy * s)
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(self.xx, self.xy, self.xy, self.yy)
    }

    pub fn inverse(&self) -> Option<Sym2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Sym2::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let r = hypot(half_diff, self.xy);
        (mean - r, mean + r)
    }

    /// Ascending eigenvalues with unit eigenvectors.
    pub fn eigen(&self) -> ((f64, Vec2), (f64, Vec2)) {
        let (lo, hi) = self.eigenvalues();
        // The eigenvector of `hi` is read off the better-conditioned row.
        let v_hi = if self.xy == 0.0 {
            if self.xx >= self.yy {
                Vec2::new(1.0, 0.0)
            } else {
                Vec2::new(0.0, 1.0)
            }
        } else {
            let r1 = Vec2::new(self.xy, hi - self.xx);
            let r2 = Vec2::new(hi - self.yy, self.xy);
            if r1.norm_sq() >= r2.norm_sq() {
                r1.normalized()
            } else {
                r2.normalized()
            }
        };
        let v_lo = v_hi.perp();
        ((lo, v_lo), (hi, v_hi))
    }

    /// Principal square root of a positive-definite matrix.
    pub fn sqrt_pd(&self) -> Option<Sym2> {
        let ((l0, e0), (l1, e1)) = self.eigen();
        if l0 <= 0.0 {
            return None;
        }
        Some(Sym2::outer(e0, sqrt(l0)) + Sym2::outer(e1, sqrt(l1)))
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }
}
impl AddAssign for Sym2 {
    fn add_assign(&mut self, o: Sym2) {
        self.xx += o.xx;
        self.xy += o.xy;
        self.yy += o.yy;
    }
}
impl Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2::new(self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)
    }
}
impl Neg for Sym2 {
    type Output = Sym2;
    fn neg(self) -> Sym2 {
        Sym2::new(-self.xx, -self.xy, -self.yy)
    }
}

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Rect { min, max }
    }

    /// `[-h, h]²`
    pub fn square(h: f64) -> Self {
        Rect::new(Vec2::new(-h, -h), Vec2::new(h, h))
    }

    pub fn contains(&self, z: Vec2) -> bool {
        z.x >= self.min.x && z.x <= self.max.x && z.y >= self.min.y && z.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    /// Largest distance from the origin to a corner.
    pub fn outer_radius(&self) -> f64 {
        let xs = self.min.x.abs().max(self.max.x.abs());
        let ys = self.min.y.abs().max(self.max.y.abs());
        hypot(xs, ys)
    }

    /// Point at fractional coordinates `(u, v) ∈ [0,1]²`.
    pub fn lerp(&self, u: f64, v: f64) -> Vec2 {
        Vec2::new(
            self.min.x + u * self.width(),
            self.min.y + v * self.height(),
        )
    }

    /// `n` points per side along the boundary, counter-clockwise.
    pub fn boundary_points(&self, n: usize) -> impl Iterator<Item = Vec2> + '_ {
        let n = n.max(1);
        (0..4 * n).map(move |k| {
            let side = k / n;
            let s = (k % n) as f64 / n as f64;
            match side {
                0 => self.lerp(s, 0.0),
                1 => self.lerp(1.0, s),
                2 => self.lerp(1.0 - s, 1.0),
                _ => self.lerp(0.0, 1.0 - s),
            }
        })
    }
}

/// Quintic smoothstep `6τ⁵ − 15τ⁴ + 10τ³` on `[0,1]`, clamped outside; C² at both ends.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

pub fn smoothstep_d1(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        30.0 * t * t * (1.0 - t) * (1.0 - t)
    }
}

pub fn smoothstep_d2(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)
    }
}

/// Antiderivative of [`smoothstep`] vanishing at 0, valid on `[0,1]`.
pub fn smoothstep_integral(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let t4 = t * t * t * t;
    t4 * (t * (t - 3.0) + 2.5)
}
