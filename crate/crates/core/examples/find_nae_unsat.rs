//! Searches seeded random monotone 3-CNFs for one with no not-all-equal
//! assignment and prints it in CNF text format.
//!
//! Usage: find_nae_unsat <vars> <clauses> <seed> [max_attempts]

use lindisc::reduction::search_nae_unsat;
use lindisc::Limits;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    if args.len() < 3 {
        eprintln!("usage: find_nae_unsat <vars> <clauses> <seed> [max_attempts]");
        std::process::exit(2);
    }
    let attempts = args.get(3).copied().unwrap_or(100_000) as usize;
    match search_nae_unsat(args[0] as usize, args[1] as usize, args[2], attempts, &Limits::default()) {
        Ok(Some((attempt, c))) => {
            println!(
                "# NAE-unsatisfiable; found by find_nae_unsat {} {} {} at attempt {attempt}",
                args[0], args[1], args[2]
            );
            print!("{}", c.serialize());
        }
        Ok(None) => {
            eprintln!("no unsatisfiable formula within {attempts} attempts");
            std::process::exit(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
