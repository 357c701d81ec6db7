//! Multi-threaded drivers. Vertices (for the gradient) and critical cells
//! (for the Morse complex) are independent work items; results are gathered
//! in input order so outputs do not depend on the thread count.

use forman_core::gradient::{
    assemble_gradient, lower_top, process_vertex, FormanGradient, GradientBits, GradientStats,
};
use forman_core::morse::{ensure_valid, trace_boundary, MorseComplex, MorseOptions};
use forman_core::{IaStarComplex, Vertex};
use rayon::prelude::*;

use crate::error::{AppError, AppResult};

pub fn thread_pool(threads: usize) -> AppResult<rayon::ThreadPool> {
    if threads == 0 {
        return Err(AppError::Usage("thread count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start thread pool: {e}")))
}

/// Gradient with the per-vertex lower-star loop spread over `pool`.
pub fn forman_gradient_parallel(
    complex: &IaStarComplex,
    pool: &rayon::ThreadPool,
) -> AppResult<(FormanGradient, GradientStats)> {
    let bits = GradientBits::new(complex)?;
    let vertices: Vec<Vertex> = complex.vertices_ascending();
    let outcomes: Vec<_> = pool.install(|| {
        vertices
            .par_iter()
            .map(|&v| {
                let star = lower_top(complex, v);
                process_vertex(complex, v, &star, &bits)
            })
            .collect()
    });
    Ok(assemble_gradient(complex, bits, outcomes))
}

/// Morse complex with one V-path traversal per critical cell on `pool`.
pub fn morse_complex_parallel(
    complex: &IaStarComplex,
    gradient: &FormanGradient,
    options: MorseOptions,
    pool: &rayon::ThreadPool,
) -> AppResult<MorseComplex> {
    if options.validate {
        ensure_valid(complex, gradient)?;
    }
    let boundaries = pool.install(|| {
        let stars: Vec<_> = (0..complex.vertex_count() as Vertex)
            .into_par_iter()
            .map(|v| complex.vertex_star(v))
            .collect();
        gradient
            .critical()
            .par_iter()
            .filter(|c| c.dim() >= 1)
            .map(|c| {
                trace_boundary(complex, gradient, &stars, c, options.queue_cap)
                    .map(|b| (c.clone(), b))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(MorseComplex::from_boundaries(
        gradient.critical().to_vec(),
        boundaries,
    )?)
}
