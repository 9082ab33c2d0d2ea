//! Parallel execution of configs and grids.
//!
//! Every replication owns its random stream, so results are bit-identical to
//! the serial engine for any worker count; rayon's ordered `collect` restores
//! index order after work stealing.

use std::fmt;
use std::str::FromStr;

use abroca_core::engine::{self, ExperimentGrid, ReplicationResult, SimConfig};
use rayon::prelude::*;

use crate::error::Result;

/// Worker thread count, or `auto` for one per available core.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Workers {
    #[default]
    Auto,
    Fixed(usize),
}

impl Workers {
    pub fn count(self) -> usize {
        match self {
            Workers::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
            Workers::Fixed(n) => n,
        }
    }
}

impl FromStr for Workers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Workers::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Workers::Fixed(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

impl fmt::Display for Workers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workers::Auto => f.write_str("auto"),
            Workers::Fixed(n) => write!(f, "{n}"),
        }
    }
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(workers: Workers) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.count())
            .build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// All replications of `config`, in index order.
    pub fn run_config(&self, config: &SimConfig) -> Result<Vec<ReplicationResult>> {
        config.validate()?;
        let out = self.pool.install(|| {
            (0..config.replications as u64)
                .into_par_iter()
                .map(|i| engine::run_replication(config, i))
                .collect::<abroca_core::Result<Vec<_>>>()
        })?;
        Ok(out)
    }

    /// Lazily runs each config of the grid in order; a failing config yields
    /// its error without stopping the rest.
    pub fn run_grid<'a>(
        &'a self,
        grid: &'a ExperimentGrid,
    ) -> impl Iterator<Item = (&'a SimConfig, Result<Vec<ReplicationResult>>)> + 'a {
        grid.configs.iter().map(move |c| (c, self.run_config(c)))
    }
}

impl fmt::Debug for Runner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Runner")
            .field("workers", &self.workers())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use abroca_core::engine::{GridName, Replications};
    use abroca_core::PopulationSpec;

    #[test]
    fn workers_parse() {
        assert_eq!("auto".parse::<Workers>().unwrap(), Workers::Auto);
        assert_eq!("3".parse::<Workers>().unwrap(), Workers::Fixed(3));
        assert!("0".parse::<Workers>().is_err());
        assert!("many".parse::<Workers>().is_err());
        assert!(Workers::Auto.count() >= 1);
    }

    #[test]
    fn parallel_equals_serial() {
        let c = SimConfig::new("par", PopulationSpec::balanced(500, 0.7), 3).with_replications(40);
        let serial = engine::run_config(&c).unwrap();
        for w in [1, 4] {
            let par = Runner::new(Workers::Fixed(w))
                .unwrap()
                .run_config(&c)
                .unwrap();
            assert_eq!(serial, par);
        }
    }

    #[test]
    fn execution_order_does_not_matter() {
        let grid = ExperimentGrid::rq3(9, 600, Replications::uniform(5));
        let runner = Runner::new(Workers::Fixed(2)).unwrap();
        let forward: Vec<_> = runner.run_grid(&grid).map(|(_, r)| r.unwrap()).collect();
        let mut reversed = grid.clone();
        reversed.configs.reverse();
        let mut backward: Vec<_> = runner
            .run_grid(&reversed)
            .map(|(_, r)| r.unwrap())
            .collect();
        backward.reverse();
        assert_eq!(forward, backward);
    }

    #[test]
    fn grid_keeps_going_after_a_failure() {
        let good =
            SimConfig::new("a-good", PopulationSpec::balanced(100, 0.8), 1).with_replications(2);
        let bad = SimConfig::new(
            "b-hopeless",
            PopulationSpec {
                minority_ratio: 1e-4,
                composition: abroca_core::Composition::Binomial,
                ..PopulationSpec::balanced(10, 0.8)
            },
            1,
        )
        .with_replications(1);
        let also_good =
            SimConfig::new("c-good", PopulationSpec::balanced(100, 0.7), 1).with_replications(2);
        let grid = ExperimentGrid::new(GridName::Custom, vec![good, bad, also_good]).unwrap();
        let runner = Runner::new(Workers::Fixed(1)).unwrap();
        let outcomes: Vec<bool> = runner.run_grid(&grid).map(|(_, r)| r.is_ok()).collect();
        assert_eq!(outcomes, vec![true, false, true]);
    }
}
