//! Piecewise-constant profiles in space and in time.

use serde::{Deserialize, Serialize};

use crate::laxwaves::State;

/// A piecewise-constant `(p, v)` profile on the real line.
///
/// `states[j]` holds on `[breaks[j-1], breaks[j])`; `states[0]` extends to
/// `−∞` and the last state to `+∞`. Breakpoints may repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub breaks: Vec<f64>,
    pub states: Vec<State>,
}

impl Field {
    pub fn constant(s: State) -> Self {
        Field {
            breaks: Vec::new(),
            states: vec![s],
        }
    }

    pub fn new(breaks: Vec<f64>, states: Vec<State>) -> Self {
        assert_eq!(states.len(), breaks.len() + 1, "one more state than breakpoints");
        debug_assert!(breaks.windows(2).all(|w| w[0] <= w[1]), "unsorted breakpoints");
        Field { breaks, states }
    }

    /// Right-continuous value at `z`.
    pub fn value_at(&self, z: f64) -> State {
        self.states[self.breaks.partition_point(|&b| b <= z)]
    }

    /// Total variation of `f` over jumps located strictly inside `]a, b[`.
    pub fn tv<F: Fn(State) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let lo = self.breaks.partition_point(|&x| x <= a);
        let hi = self.breaks.partition_point(|&x| x < b);
        (lo..hi)
            .map(|j| (f(self.states[j + 1]) - f(self.states[j])).abs())
            .sum()
    }

    /// Exact `∫_a^b f(u(z)) dz`.
    pub fn integral<F: Fn(State) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        let mut left = a;
        let mut j = self.breaks.partition_point(|&x| x <= a);
        while j < self.breaks.len() && self.breaks[j] < b {
            total += f(self.states[j]) * (self.breaks[j] - left);
            left = self.breaks[j];
            j += 1;
        }
        total + f(self.states[j]) * (b - left)
    }

    /// Exact `∫_a^b |f(u) − f(w)| dz` by merging breakpoints.
    pub fn l1_distance<F: Fn(State) -> f64>(&self, other: &Field, f: F, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .copied()
            .filter(|&x| x > a && x < b)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        let mut left = a;
        for x in cuts.into_iter().chain(std::iter::once(b)) {
            if x > left {
                // both fields are constant on ]left, x[
                let mid = 0.5 * (left + x);
                total += (f(self.value_at(mid)) - f(other.value_at(mid))).abs() * (x - left);
                left = x;
            }
        }
        total
    }
}

/// A right-continuous piecewise-constant function of time on `[times[0], ∞)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<State>,
}

impl TimeSeries {
    pub fn starting(t: f64, s: State) -> Self {
        TimeSeries {
            times: vec![t],
            values: vec![s],
        }
    }

    pub fn last(&self) -> Option<State> {
        self.values.last().copied()
    }

    /// Appends a change point; `t` must not precede the previous one.
    pub fn push(&mut self, t: f64, s: State) {
        debug_assert!(self.times.last().is_none_or(|&l| t >= l));
        if self.values.last() != Some(&s) {
            self.times.push(t);
            self.values.push(s);
        }
    }

    pub fn value_at(&self, t: f64) -> State {
        let j = self.times.partition_point(|&x| x <= t);
        self.values[j.saturating_sub(1)]
    }

    /// Exact `∫_a^b f(u(t)) dt`.
    pub fn integral<F: Fn(State) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        let mut left = a;
        let mut j = self.times.partition_point(|&x| x <= a).saturating_sub(1);
        while j + 1 < self.times.len() && self.times[j + 1] < b {
            let next = self.times[j + 1];
            if next > left {
                total += f(self.values[j]) * (next - left);
                left = next;
            }
            j += 1;
        }
        total + f(self.values[j]) * (b - left)
    }

    /// Total variation of `f` over change points in `]a, b]`.
    pub fn tv<F: Fn(State) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for j in 1..self.times.len() {
            if self.times[j] > a && self.times[j] <= b {
                total += (f(self.values[j]) - f(self.values[j - 1])).abs();
            }
        }
        total
    }
}
