//! Flat `key = value` run files. Top-level keys describe the grid; `[bsfla]`, `[ga]` and
//! `[pso]` sections override algorithm parameters.

use std::path::Path;
use std::str::FromStr;

use ini::Ini;

use super::{Algorithm, RunSpec};
use crate::error::{Error, Result};

/// Seeds as a comma list whose items are integers or half-open ranges `a..b`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = |item: &str| Error::Config(format!("bad seed `{item}`"));
    let mut seeds = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad(item))?;
                let b: u64 = b.trim().parse().map_err(|_| bad(item))?;
                seeds.extend(a..b);
            }
            None => seeds.push(item.parse().map_err(|_| bad(item))?),
        }
    }
    Ok(seeds)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_switch(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("bad value `{value}` for `{key}`"))),
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Apply a run file's settings to `spec`. Unknown keys are errors.
pub fn apply_ini(spec: &mut RunSpec, text: &str) -> Result<()> {
    let ini = Ini::load_from_str(text).map_err(|e| Error::Parse {
        line: e.line,
        message: e.msg.to_string(),
    })?;
    for (section, props) in ini.iter() {
        for (key, value) in props.iter() {
            match (section, key) {
                (None, "datasets") => spec.datasets = list(value).map(Into::into).collect(),
                (None, "algorithms") => {
                    spec.algorithms = list(value).map(str::parse).collect::<Result<Vec<Algorithm>>>()?
                }
                (None, "seeds") => spec.seeds = parse_seeds(value)?,
                (None, "output") => spec.output = Some(value.trim().into()),
                (None, "class") => spec.class = Some(value.trim().to_string()),
                (None, "sigma") => spec.sigma = value.parse()?,
                (None, "normalize") => spec.normalize = parse_switch(key, value)?,
                (None, "jobs") => spec.jobs = parse(key, value)?,
                (None, "proxy_folds") => spec.proxy_folds = Some(parse(key, value)?),
                (Some("bsfla"), _) => apply_bsfla(spec, key, value)?,
                (Some("ga"), _) => apply_ga(spec, key, value)?,
                (Some("pso"), _) => apply_pso(spec, key, value)?,
                _ => {
                    return Err(Error::Config(format!(
                        "unknown setting `{key}` in section `{}`",
                        section.unwrap_or("general")
                    )))
                }
            }
        }
    }
    Ok(())
}

fn apply_bsfla(spec: &mut RunSpec, key: &str, value: &str) -> Result<()> {
    let b = &mut spec.settings.bsfla;
    match key {
        "preset" => b.preset = value.parse()?,
        "distance" => b.distance = value.trim().parse()?,
        "m" | "memeplexes" => b.memeplexes = Some(parse(key, value)?),
        "n" | "frogs_per_memeplex" => b.frogs_per_memeplex = Some(parse(key, value)?),
        "N" | "evolution_steps" => b.evolution_steps = Some(parse(key, value)?),
        "q" | "submemeplex" => b.submemeplex = Some(parse(key, value)?),
        "s_max" | "max_step" => b.max_step = Some(parse(key, value)?),
        "max_shuffles" => b.max_shuffles = Some(parse(key, value)?),
        "stall_shuffles" => b.stall_shuffles = Some(parse(key, value)?),
        _ => return Err(Error::Config(format!("unknown bsfla setting `{key}`"))),
    }
    Ok(())
}

fn apply_ga(spec: &mut RunSpec, key: &str, value: &str) -> Result<()> {
    let g = &mut spec.settings.ga;
    match key {
        "population" => g.population = parse(key, value)?,
        "generations" => g.generations = parse(key, value)?,
        "p_crossover" => g.p_crossover = parse(key, value)?,
        "p_mutation" => g.p_mutation = parse(key, value)?,
        _ => return Err(Error::Config(format!("unknown ga setting `{key}`"))),
    }
    Ok(())
}

fn apply_pso(spec: &mut RunSpec, key: &str, value: &str) -> Result<()> {
    let p = &mut spec.settings.pso;
    match key {
        "particles" => p.particles = parse(key, value)?,
        "iterations" => p.iterations = parse(key, value)?,
        "c1" => p.c1 = parse(key, value)?,
        "c2" => p.c2 = parse(key, value)?,
        "v_max" => p.v_max = parse(key, value)?,
        "inertia" => p.inertia = parse(key, value)?,
        _ => return Err(Error::Config(format!("unknown pso setting `{key}`"))),
    }
    Ok(())
}

pub fn load_config(path: &Path, spec: &mut RunSpec) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    apply_ini(spec, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsfla::DistanceMode;
    use crate::datatable::SigmaMode;
    use crate::harness::BsflaPreset;

    #[test]
    fn seeds_lists_and_ranges() {
        assert_eq!(parse_seeds("1, 5..8,2").unwrap(), vec![1, 5, 6, 7, 2]);
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn full_file() {
        let text = "datasets = a.csv, b.arff\nalgorithms = bsfla, qr\nseeds = 0..3\nsigma = stddev\n\
                    normalize = off\njobs = 4\nproxy_folds = 5\n\n[bsfla]\npreset = fixed\nm = 8\n\
                    N = 2\ndistance = posregion\n\n[ga]\npopulation = 50\n\n[pso]\nc1 = 1.5\n";
        let mut spec = RunSpec::default();
        apply_ini(&mut spec, text).unwrap();
        assert_eq!(spec.datasets.len(), 2);
        assert_eq!(spec.algorithms, vec![Algorithm::Bsfla, Algorithm::QuickReduct]);
        assert_eq!(spec.seeds, vec![0, 1, 2]);
        assert_eq!(spec.sigma, SigmaMode::Stddev);
        assert!(!spec.normalize);
        assert_eq!((spec.jobs, spec.proxy_folds), (4, Some(5)));
        let b = &spec.settings.bsfla;
        assert_eq!(b.preset, BsflaPreset::Fixed);
        assert_eq!((b.memeplexes, b.evolution_steps), (Some(8), Some(2)));
        assert_eq!(b.distance, DistanceMode::PosRegion);
        assert_eq!(spec.settings.ga.population, 50);
        assert_eq!(spec.settings.pso.c1, 1.5);
    }

    #[test]
    fn unknown_keys_and_algorithms_rejected() {
        let mut spec = RunSpec::default();
        assert!(apply_ini(&mut spec, "colour = blue\n").is_err());
        assert!(apply_ini(&mut spec, "algorithms = bsfla, tabu\n").is_err());
        assert!(apply_ini(&mut spec, "[bsfla]\nfrogs = 3\n").is_err());
    }
}
