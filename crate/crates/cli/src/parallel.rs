use copolar_core::obstruction::{
    examine, Enumerator, Miner, MiningReport, MiningStats, ObstructionError,
};
use copolar_core::Param;
use rayon::prelude::*;

/// Mines each order's classes across a thread pool. Results are collected in
/// enumeration order, so output does not depend on the worker count.
pub struct ParallelMiner {
    pool: rayon::ThreadPool,
    pub validate_witnesses: bool,
}

impl ParallelMiner {
    pub fn new(workers: Option<usize>, validate_witnesses: bool) -> Self {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            builder = builder.num_threads(n.max(1));
        }
        Self {
            pool: builder.build().expect("thread pool"),
            validate_witnesses,
        }
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Miner for ParallelMiner {
    fn mine(&self, s: Param, k: Param, n_max: usize) -> Result<MiningReport, ObstructionError> {
        let mut en = Enumerator::new(n_max)?;
        let mut report = MiningReport {
            s,
            k,
            bound: n_max,
            records: Vec::new(),
            stats: MiningStats::default(),
        };
        for n in 1..=n_max {
            let codes = en.codes_of_order(n)?;
            let results: Vec<_> = self.pool.install(|| {
                codes
                    .par_iter()
                    .map(|c| examine(c, s, k, self.validate_witnesses))
                    .collect()
            });
            for e in results {
                let e = e?;
                report.stats.absorb(&e);
                report.records.extend(e.record);
            }
        }
        report.sort();
        Ok(report)
    }
}
