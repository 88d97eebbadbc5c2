//! Round grids: the geometric default and the `geometric:`/`list:`
//! mini-language used by the CLI.

/// Geometric grid of integer rounds from `start` to `stop` inclusive,
/// floored, deduplicated, ascending.
pub fn geometric_grid(start: u64, stop: u64, points: usize) -> Vec<u64> {
    assert!(start >= 1 && stop >= start && points >= 1);
    if points == 1 || start == stop {
        return if start == stop {
            vec![start]
        } else {
            vec![start, stop]
        };
    }
    let ratio = stop as f64 / start as f64;
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            ((start as f64) * ratio.powf(f)).floor() as u64
        })
        .collect();
    // Exact endpoints regardless of rounding.
    grid[0] = start;
    *grid.last_mut().unwrap() = stop;
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Parses `geometric:<start>:<stop>:<points>` or `list:a,b,c`. Values may
/// be written in scientific notation (`1e9`); they are floored to
/// integers, deduplicated, and sorted.
pub fn parse_t_grid(spec: &str) -> Result<Vec<u64>, String> {
    if let Some(rest) = spec.strip_prefix("geometric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "expected geometric:<start>:<stop>:<points>, got '{spec}'"
            ));
        }
        let start = parse_round(parts[0])?;
        let stop = parse_round(parts[1])?;
        let points = parse_round(parts[2])? as usize;
        if start < 1 || stop < start || points < 1 {
            return Err(format!(
                "grid needs 1 <= start <= stop and points >= 1, got '{spec}'"
            ));
        }
        Ok(geometric_grid(start, stop, points))
    } else if let Some(rest) = spec.strip_prefix("list:") {
        let mut grid = rest
            .split(',')
            .map(parse_round)
            .collect::<Result<Vec<u64>, String>>()?;
        if grid.is_empty() {
            return Err("list grid is empty".into());
        }
        grid.sort_unstable();
        grid.dedup();
        if grid[0] == 0 {
            return Err("grid rounds must be at least 1".into());
        }
        Ok(grid)
    } else {
        Err(format!(
            "grid spec must start with 'geometric:' or 'list:', got '{spec}'"
        ))
    }
}

fn parse_round(s: &str) -> Result<u64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if !(v.is_finite() && v >= 0.0 && v <= u64::MAX as f64) {
        return Err(format!("'{s}' is out of range"));
    }
    Ok(v.floor() as u64)
}
