//! NSGA-II over the field model.

pub mod nsga2;
pub mod operators;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EvolutionError;
use crate::layout::{EngineSettings, Genome, LayoutModel};
use crate::spec::{DesignSpec, Objective};

pub use nsga2::{crowding_distance, dominates, fast_nondominated_sort, rank_and_crowd, select_survivors};
pub use operators::make_offspring;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    /// Per-gene mutation probability.
    pub mutation_probability: f64,
    /// SBX distribution index.
    pub eta_c: f64,
    /// Polynomial mutation distribution index.
    pub eta_m: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 100,
            crossover_probability: 0.9,
            mutation_probability: 0.1,
            eta_c: 20.0,
            eta_m: 20.0,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |m: &str| Err(EvolutionError::Config(m.to_string()));
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return bad("population size must be even and at least 4");
        }
        for (name, p) in [
            ("crossover probability", self.crossover_probability),
            ("mutation probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(EvolutionError::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.eta_c > 0.0 && self.eta_m > 0.0) {
            return bad("distribution indices must be positive");
        }
        Ok(())
    }
}

/// One evaluated individual as stored in the archive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveMember {
    pub genome: Genome,
    pub objectives: Vec<f64>,
    /// Generation in which the individual was created (0 = initial population).
    pub generation: usize,
    pub internal_area: f64,
    pub conflict: f64,
    pub unreachable_rooms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSnapshot {
    pub generation: usize,
    pub population: Vec<ArchiveMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArchive {
    pub objectives: Vec<Objective>,
    pub config: OptimizerConfig,
    pub settings: EngineSettings,
    /// Population after each generation; index 0 is the initial population.
    pub generations: Vec<GenerationSnapshot>,
    /// Final first front, exact objective-vector duplicates removed.
    pub pareto: Vec<ArchiveMember>,
    pub evaluations: usize,
    /// Not serialised so that archives stay byte-reproducible.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl RunArchive {
    /// First-front members of a stored generation.
    pub fn front_of(&self, generation: usize) -> Vec<&ArchiveMember> {
        let pop = &self.generations[generation].population;
        let objs: Vec<&[f64]> = pop.iter().map(|m| m.objectives.as_slice()).collect();
        let fronts = fast_nondominated_sort(&objs).expect("archived vectors share a length");
        fronts
            .first()
            .map(|f| f.iter().map(|&i| &pop[i]).collect())
            .unwrap_or_default()
    }
}

/// Uniform random genomes from the seeded generator.
pub fn initialize_population(config: &OptimizerConfig, spec: &DesignSpec) -> Vec<Genome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    random_population(config.population_size, Genome::expected_len(spec.rooms.len()), &mut rng)
}

fn random_population<R: Rng>(size: usize, len: usize, rng: &mut R) -> Vec<Genome> {
    (0..size)
        .map(|_| Genome((0..len).map(|_| rng.gen::<f64>()).collect()))
        .collect()
}

fn evaluate_all(model: &LayoutModel, genomes: Vec<Genome>, generation: usize) -> Vec<ArchiveMember> {
    // collected in index order, so parallel evaluation stays deterministic
    genomes
        .into_par_iter()
        .map(|genome| {
            let layout = model.generate(&genome).expect("genome length fixed by the model");
            ArchiveMember {
                objectives: layout.objectives.values,
                generation,
                internal_area: layout.scores.internal_area,
                conflict: layout.scores.conflict,
                unreachable_rooms: layout.scores.unreachable_rooms,
                genome,
            }
        })
        .collect()
}

/// Generational NSGA-II: parents and children compete for survival each generation.
pub fn evolve(spec: &DesignSpec, config: &OptimizerConfig, settings: EngineSettings) -> Result<RunArchive, EvolutionError> {
    config.validate()?;
    let started = Instant::now();
    let model = LayoutModel::new(spec.clone(), settings)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = random_population(config.population_size, model.genome_len(), &mut rng);
    let mut population = evaluate_all(&model, initial, 0);
    let mut evaluations = population.len();
    let mut generations = vec![GenerationSnapshot {
        generation: 0,
        population: population.clone(),
    }];

    for generation in 1..=config.generations {
        let objs: Vec<&[f64]> = population.iter().map(|m| m.objectives.as_slice()).collect();
        let (rank, crowd) = rank_and_crowd(&objs)?;
        let genomes: Vec<Genome> = population.iter().map(|m| m.genome.clone()).collect();
        let children = make_offspring(&genomes, &rank, &crowd, config, &mut rng);
        let children = evaluate_all(&model, children, generation);
        evaluations += children.len();

        let mut combined = population;
        combined.extend(children);
        let objs: Vec<&[f64]> = combined.iter().map(|m| m.objectives.as_slice()).collect();
        let keep = select_survivors(&objs, config.population_size)?;
        population = keep.into_iter().map(|i| combined[i].clone()).collect();
        generations.push(GenerationSnapshot {
            generation,
            population: population.clone(),
        });
    }

    let objs: Vec<&[f64]> = population.iter().map(|m| m.objectives.as_slice()).collect();
    let first = fast_nondominated_sort(&objs)?.into_iter().next().unwrap_or_default();
    let mut pareto: Vec<ArchiveMember> = Vec::new();
    for i in first {
        if !pareto.iter().any(|m| m.objectives == population[i].objectives) {
            pareto.push(population[i].clone());
        }
    }

    Ok(RunArchive {
        objectives: spec.objectives.clone(),
        config: *config,
        settings,
        generations,
        pareto,
        evaluations,
        wall_clock: started.elapsed(),
    })
}
