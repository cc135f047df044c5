//! Problem instance, trajectories and schedules.
//!
//! Everything is stored in SI units (meters, seconds, watts, linear gains).
//! Decibel values only appear in the configuration text.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Default tolerance on the squared per-slot travel constraint, in m².
pub const DEFAULT_FEAS_TOL: f64 = 1e-6;
/// Tolerance on the closure equality `q[first] = q[last]`, in m.
pub const PERIODICITY_TOL: f64 = 1e-9;

/// Horizontal position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist2(self, other: Point2) -> f64 {
        (self - other).norm2()
    }

    pub fn dist(self, other: Point2) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn centroid(points: &[Point2]) -> Point2 {
        let k = points.len() as f64;
        let sum = points.iter().fold(Point2::default(), |acc, &p| acc + p);
        Point2::new(sum.x / k, sum.y / k)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Physical and discretization parameters, everything but the user layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub altitude_m: f64,
    pub period_s: f64,
    pub num_slots: usize,
    pub v_max_mps: f64,
    pub tx_power_w: f64,
    /// Linear channel power gain at 1 m.
    pub ref_gain: f64,
    pub noise_power_w: f64,
}

impl PhysicalParams {
    /// H = 100 m, V_max = 50 m/s, P = 0.1 W, -50 dB reference gain,
    /// -110 dBm noise; period and slot count must be filled in.
    pub fn reference(period_s: f64, num_slots: usize) -> Self {
        Self {
            altitude_m: 100.0,
            period_s,
            num_slots,
            v_max_mps: 50.0,
            tx_power_w: 0.1,
            ref_gain: 1e-5,
            noise_power_w: 1e-14,
        }
    }
}

/// An immutable, validated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    users: Vec<Point2>,
    params: PhysicalParams,
    slot_len_s: f64,
    s_max_m: f64,
    gamma0: f64,
}

impl Scenario {
    pub fn new(users: Vec<Point2>, params: PhysicalParams) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::InvalidConfig("at least one user is required".into()));
        }
        if let Some(i) = users.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(format!("user {i} has a non-finite position")));
        }
        let positive = [
            ("altitude_m", params.altitude_m),
            ("period_s", params.period_s),
            ("v_max_mps", params.v_max_mps),
            ("tx_power_w", params.tx_power_w),
            ("ref_gain_db", params.ref_gain),
            ("noise_power_dbm", params.noise_power_w),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveParameter(key.into()));
            }
        }
        if params.num_slots < 2 {
            return Err(Error::InvalidConfig("num_slots must be at least 2".into()));
        }
        let slot_len_s = params.period_s / params.num_slots as f64;
        let s_max_m = params.v_max_mps * slot_len_s;
        let gamma0 = params.tx_power_w * params.ref_gain / params.noise_power_w;
        if !(gamma0 > 0.0 && gamma0.is_finite()) || !(s_max_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "derived quantities out of range (gamma0 = {gamma0}, s_max = {s_max_m})"
            )));
        }
        Ok(Self {
            users,
            params,
            slot_len_s,
            s_max_m,
            gamma0,
        })
    }

    /// Same users and physics with a different period and slot count.
    pub fn with_period(&self, period_s: f64, num_slots: usize) -> Result<Self> {
        Self::new(
            self.users.clone(),
            PhysicalParams {
                period_s,
                num_slots,
                ..self.params
            },
        )
    }

    pub fn users(&self) -> &[Point2] {
        &self.users
    }

    pub fn user(&self, i: usize) -> Result<Point2> {
        self.users.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.users.len(),
        })
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn altitude_m(&self) -> f64 {
        self.params.altitude_m
    }

    pub fn period_s(&self) -> f64 {
        self.params.period_s
    }

    pub fn num_slots(&self) -> usize {
        self.params.num_slots
    }

    pub fn v_max_mps(&self) -> f64 {
        self.params.v_max_mps
    }

    /// Slot length T/N.
    pub fn slot_len_s(&self) -> f64 {
        self.slot_len_s
    }

    /// Maximum horizontal travel per slot, V_max·T/N.
    pub fn s_max_m(&self) -> f64 {
        self.s_max_m
    }

    /// Reference SNR at 1 m, P·ρ₀/σ².
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    /// Slot count for a target slot length: ceil(T / slot_len).
    pub fn slots_for(period_s: f64, slot_len_s: f64) -> usize {
        let n = (period_s / slot_len_s - 1e-9).ceil();
        (n.max(2.0)) as usize
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

const KEYS: [&str; 8] = [
    "users",
    "altitude_m",
    "period_s",
    "num_slots",
    "v_max_mps",
    "tx_power_w",
    "ref_gain_db",
    "noise_power_dbm",
];

/// Parses the flat `key = value` scenario format.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
    for (lineno, raw) in source.lines().enumerate() {
        let line = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Syntax {
            line: lineno + 1,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::UnknownKey(key.to_string()));
        }
        if entries.insert(key, value.trim()).is_some() {
            return Err(Error::DuplicateKey(key.to_string()));
        }
    }

    let get = |key: &str| -> Result<&str> {
        entries
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingKey(key.to_string()))
    };
    let number = |key: &str| -> Result<f64> {
        let raw = get(key)?;
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::MalformedNumber {
                key: key.to_string(),
                value: raw.to_string(),
            })
    };

    let users = parse_users(get("users")?)?;
    let altitude_m = number("altitude_m")?;
    let period_s = number("period_s")?;
    let num_slots_raw = get("num_slots")?;
    let num_slots: usize = num_slots_raw.parse().map_err(|_| Error::MalformedNumber {
        key: "num_slots".into(),
        value: num_slots_raw.into(),
    })?;
    if num_slots == 0 {
        return Err(Error::NonPositiveParameter("num_slots".into()));
    }
    let v_max_mps = number("v_max_mps")?;
    let tx_power_w = number("tx_power_w")?;
    let ref_gain = db_to_linear(number("ref_gain_db")?);
    let noise_power_w = dbm_to_watts(number("noise_power_dbm")?);

    Scenario::new(
        users,
        PhysicalParams {
            altitude_m,
            period_s,
            num_slots,
            v_max_mps,
            tx_power_w,
            ref_gain,
            noise_power_w,
        },
    )
}

fn parse_users(raw: &str) -> Result<Vec<Point2>> {
    let malformed = || Error::MalformedNumber {
        key: "users".into(),
        value: raw.into(),
    };
    let mut users = Vec::new();
    for pair in raw.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, y) = pair.split_once(',').ok_or_else(malformed)?;
        let x: f64 = x.trim().parse().map_err(|_| malformed())?;
        let y: f64 = y.trim().parse().map_err(|_| malformed())?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(malformed());
        }
        users.push(Point2::new(x, y));
    }
    Ok(users)
}

/// Serializes a scenario back into the configuration format.
pub fn render_scenario(s: &Scenario) -> String {
    let p = s.params();
    let mut out = String::new();
    let users = s
        .users()
        .iter()
        .map(|u| format!("{:?},{:?}", u.x, u.y))
        .collect::<Vec<_>>()
        .join("; ");
    let _ = writeln!(out, "users = {users}");
    let _ = writeln!(out, "altitude_m = {:?}", p.altitude_m);
    let _ = writeln!(out, "period_s = {:?}", p.period_s);
    let _ = writeln!(out, "num_slots = {}", p.num_slots);
    let _ = writeln!(out, "v_max_mps = {:?}", p.v_max_mps);
    let _ = writeln!(out, "tx_power_w = {:?}", p.tx_power_w);
    let _ = writeln!(out, "ref_gain_db = {:?}", 10.0 * p.ref_gain.log10());
    let _ = writeln!(out, "noise_power_dbm = {:?}", 10.0 * p.noise_power_w.log10() + 30.0);
    out
}

/// A closed UAV path with one horizontal waypoint per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<Point2>,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Point2>) -> Self {
        Self { waypoints }
    }

    /// Builds a closed path from the first N-1 waypoints; the last one
    /// is an exact copy of the first.
    pub fn closed(mut free: Vec<Point2>) -> Self {
        if let Some(&first) = free.first() {
            free.push(first);
        }
        Self { waypoints: free }
    }

    pub fn hover(at: Point2, num_slots: usize) -> Self {
        Self {
            waypoints: vec![at; num_slots],
        }
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    /// Per-slot speeds ‖q[n+1] − q[n]‖ / δ_t, length N − 1.
    pub fn speeds(&self, slot_len_s: f64) -> Vec<f64> {
        self.waypoints
            .windows(2)
            .map(|w| w[0].dist(w[1]) / slot_len_s)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// First and last waypoint differ by `gap_m`.
    Periodicity { gap_m: f64 },
    /// ‖q[slot+1] − q[slot]‖² exceeds S_max² by `excess_m2`.
    Speed { slot: usize, excess_m2: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Periodicity { gap_m } => write!(f, "closure gap {gap_m:.3e} m"),
            Violation::Speed { slot, excess_m2 } => {
                write!(f, "slot {slot}: travel exceeds cap by {excess_m2:.3e} m^2")
            }
        }
    }
}

/// Result of [`validate_trajectory`]; feasible when no violations were found.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_feasible() {
            Ok(())
        } else {
            let first: Vec<String> = self.violations.iter().take(3).map(|v| v.to_string()).collect();
            Err(Error::InfeasibleTrajectory(format!(
                "{} violation(s): {}",
                self.violations.len(),
                first.join(", ")
            )))
        }
    }
}

/// Checks closure and per-slot travel constraints.
pub fn validate_trajectory(s: &Scenario, t: &Trajectory, feas_tol: f64) -> Result<Feasibility> {
    let n = s.num_slots();
    if t.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: t.len(),
        });
    }
    let wp = t.waypoints();
    let mut violations = Vec::new();
    let gap = wp[0].dist(wp[n - 1]);
    if !(gap <= PERIODICITY_TOL) {
        violations.push(Violation::Periodicity { gap_m: gap });
    }
    let cap2 = s.s_max_m() * s.s_max_m();
    for (slot, w) in wp.windows(2).enumerate() {
        let excess = w[0].dist2(w[1]) - cap2;
        if !(excess <= feas_tol) {
            violations.push(Violation::Speed {
                slot,
                excess_m2: excess,
            });
        }
    }
    Ok(Feasibility { violations })
}

/// K×N matrix of slot shares α_i[n], stored row-major by user.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    num_users: usize,
    num_slots: usize,
    shares: Vec<f64>,
}

impl Schedule {
    pub fn zeros(num_users: usize, num_slots: usize) -> Self {
        Self {
            num_users,
            num_slots,
            shares: vec![0.0; num_users * num_slots],
        }
    }

    /// Builds from per-user rows; checks bounds and the per-slot sum.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let num_users = rows.len();
        let num_slots = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != num_slots) {
            return Err(Error::DimensionMismatch("ragged schedule rows".into()));
        }
        let shares: Vec<f64> = rows.iter().flatten().copied().collect();
        let sched = Self {
            num_users,
            num_slots,
            shares,
        };
        sched.check(1e-9)?;
        Ok(sched)
    }

    pub(crate) fn from_raw(num_users: usize, num_slots: usize, shares: Vec<f64>) -> Self {
        debug_assert_eq!(shares.len(), num_users * num_slots);
        Self {
            num_users,
            num_slots,
            shares,
        }
    }

    fn check(&self, tol: f64) -> Result<()> {
        if let Some(v) = self.shares.iter().find(|v| !(**v >= -tol && **v <= 1.0 + tol)) {
            return Err(Error::InvalidConfig(format!("slot share {v} outside [0, 1]")));
        }
        for n in 0..self.num_slots {
            let sum = self.slot_total(n);
            if sum > 1.0 + tol {
                return Err(Error::InvalidConfig(format!("slot {n} shares sum to {sum}")));
            }
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn get(&self, user: usize, slot: usize) -> f64 {
        self.shares[user * self.num_slots + slot]
    }

    pub fn set(&mut self, user: usize, slot: usize, value: f64) {
        self.shares[user * self.num_slots + slot] = value;
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.shares[user * self.num_slots..(user + 1) * self.num_slots]
    }

    pub fn slot_total(&self, slot: usize) -> f64 {
        (0..self.num_users).map(|i| self.get(i, slot)).sum()
    }

    /// Every entry is exactly 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.shares.iter().all(|&v| v == 0.0 || v == 1.0)
    }
}
