//! Uniformly random feasible assignments, used as test points.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::model::{Assignment, Ward};

/// Shuffles the bed slots of every day and picks a random rostered nurse for
/// every patient-shift.
pub fn random_assignment(ward: &Ward, seed: u64) -> Result<Assignment, SolveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Assignment::empty(ward);
    let slots: Vec<usize> =
        ward.rooms.iter().enumerate().flat_map(|(r, room)| std::iter::repeat_n(r, room.beds)).collect();
    for d in ward.calendar.days() {
        let present = ward.patients_on_day(d);
        if present.len() > slots.len() {
            return Err(SolveError::Infeasible {
                day: d,
                reason: format!("{} patients for {} beds", present.len(), slots.len()),
            });
        }
        let mut beds = slots.clone();
        beds.shuffle(&mut rng);
        for (&p, &r) in present.iter().zip(&beds) {
            a.rooms[p][d] = Some(r);
        }
    }
    for (p, pt) in ward.patients.iter().enumerate() {
        for s in pt.shifts() {
            let n = ward.on_shift[s].choose(&mut rng).ok_or_else(|| SolveError::Infeasible {
                day: s.div_ceil(3),
                reason: format!("no nurse on duty for shift {s}"),
            })?;
            a.nurses[p][s] = Some(*n);
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::check_feasibility;
    use crate::instgen::generate_tiny;

    #[test]
    fn random_points_are_feasible_and_seeded() {
        for seed in 0..20 {
            let w = Ward::compile(&generate_tiny(seed)).unwrap();
            let a = random_assignment(&w, seed).unwrap();
            assert!(check_feasibility(&w, &a.to_solution(&w, "r")).unwrap().is_feasible());
            assert_eq!(a, random_assignment(&w, seed).unwrap());
        }
    }
}
