//! Real-coded variation on the unit hypercube: binary tournament, simulated
//! binary crossover and polynomial mutation.

use rand::Rng;

use super::nsga2::crowded_cmp;
use super::OptimizerConfig;
use crate::layout::Genome;

/// Binary tournament under the crowded comparison.
pub fn tournament<R: Rng>(rank: &[usize], crowd: &[f64], rng: &mut R) -> usize {
    let a = rng.gen_range(0..rank.len());
    let b = rng.gen_range(0..rank.len());
    match crowded_cmp(a, b, rank, crowd) {
        std::cmp::Ordering::Greater => b,
        _ => a,
    }
}

/// SBX on one gene pair. The children's mean equals the parents' mean.
pub fn sbx_pair<R: Rng>(y1: f64, y2: f64, eta: f64, rng: &mut R) -> (f64, f64) {
    if (y1 - y2).abs() < 1e-14 {
        return (y1, y2);
    }
    let u: f64 = rng.gen();
    let beta = if u <= 0.5 {
        (2.0 * u).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
    };
    let mean = 0.5 * (y1 + y2);
    let half = 0.5 * beta * (y2 - y1);
    (mean - half, mean + half)
}

/// Polynomial mutation of a gene in `[0, 1]`.
pub fn polynomial_mutation<R: Rng>(y: f64, eta: f64, rng: &mut R) -> f64 {
    let d1 = y;
    let d2 = 1.0 - y;
    let r: f64 = rng.gen();
    let power = 1.0 / (eta + 1.0);
    let dq = if r < 0.5 {
        let v = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1).powf(eta + 1.0);
        v.powf(power) - 1.0
    } else {
        let v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2).powf(eta + 1.0);
        1.0 - v.powf(power)
    };
    y + dq
}

/// Breed `config.population_size` children from an evaluated population.
pub fn make_offspring<R: Rng>(
    population: &[Genome],
    rank: &[usize],
    crowd: &[f64],
    config: &OptimizerConfig,
    rng: &mut R,
) -> Vec<Genome> {
    let mut children = Vec::with_capacity(config.population_size);
    while children.len() < config.population_size {
        let p1 = &population[tournament(rank, crowd, rng)].0;
        let p2 = &population[tournament(rank, crowd, rng)].0;
        let (mut c1, mut c2) = (p1.clone(), p2.clone());
        if rng.gen::<f64>() < config.crossover_probability {
            for i in 0..c1.len() {
                let (a, b) = sbx_pair(p1[i], p2[i], config.eta_c, rng);
                c1[i] = a;
                c2[i] = b;
            }
        }
        for child in [&mut c1, &mut c2] {
            for gene in child.iter_mut() {
                if rng.gen::<f64>() < config.mutation_probability {
                    *gene = polynomial_mutation(gene.clamp(0.0, 1.0), config.eta_m, rng);
                }
                *gene = gene.clamp(0.0, 1.0);
            }
        }
        children.push(Genome(c1));
        if children.len() < config.population_size {
            children.push(Genome(c2));
        }
    }
    children
}
