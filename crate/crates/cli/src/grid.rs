use std::str::FromStr;

use oscbath::models::log_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// `start:stop:count:log|lin`. A count of one means just `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count, spacing] = parts[..] else {
            return Err(format!("grid `{s}` must look like start:stop:count:log|lin"));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("grid `{s}`: `{t}` is not a finite number"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count
            .parse()
            .map_err(|_| format!("grid `{s}`: count `{count}` is not a positive integer"))?;
        let spacing = match spacing {
            "log" => Spacing::Log,
            "lin" => Spacing::Linear,
            other => return Err(format!("grid `{s}`: spacing `{other}` must be log or lin")),
        };
        if count == 0 {
            return Err(format!("grid `{s}`: count must be at least 1"));
        }
        if count > 1 && start >= stop {
            return Err(format!("grid `{s}`: start must be below stop"));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(format!("grid `{s}`: log spacing needs a positive start"));
        }
        Ok(Self {
            start,
            stop,
            count,
            spacing,
        })
    }
}

impl GridSpec {
    /// Ascending grid points; the endpoints are exact.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        match self.spacing {
            Spacing::Log => log_grid(self.start, self.stop, self.count),
            Spacing::Linear => {
                let n = self.count - 1;
                (0..self.count)
                    .map(|i| {
                        if i == n {
                            self.stop
                        } else {
                            self.start + (self.stop - self.start) * i as f64 / n as f64
                        }
                    })
                    .collect()
            }
        }
    }
}
