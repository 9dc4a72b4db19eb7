//! Check the ten reference queries against their expected results.

use exists_lab::fixtures::{mapping_name, FIXTURES};
use exists_lab::{eval_query, Semantics};

fn main() {
    let mut matching = 0;
    for f in &FIXTURES {
        let data = f.data.dataset();
        let query = f.parse().expect("fixture parses");
        let mut cells = Vec::new();
        for sem in Semantics::ALL {
            let got = eval_query(&data, &query, sem).expect("evaluates");
            if got == f.expected(sem) {
                matching += 1;
            }
            let names: Vec<&str> = got.iter().map(|m| mapping_name(m).unwrap_or("?")).collect();
            cells.push(format!("{{{}}}", names.join(", ")));
        }
        println!("{:>2}  {:<18}{:<18}{}", f.id, cells[0], cells[1], cells[2]);
    }
    println!("{matching}/30 cells match");
}
