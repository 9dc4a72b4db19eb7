//! Parse a small dataset with a named graph and print it back.

use exists_lab::parse_data;
use exists_lab::turtle::serialize_data;

fn main() {
    let data = "\
:a :parent :b .
:b :parent :c .
GRAPH <urn:extra> { :c :parent :d . }
";
    let dataset = parse_data(data).expect("valid data");
    println!("{} triples in the default graph", dataset.default_graph().len());
    for (name, graph) in dataset.named_graphs() {
        println!("{} triples in <{name}>", graph.len());
    }
    print!("{}", serialize_data(&dataset));
}
