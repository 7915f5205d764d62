fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        for (name, src) in fbdecomp::fixtures::ALL {
            let n = fbdecomp::parse_netlist(src, &Default::default()).unwrap();
            let d = fbdecomp::decompose(&n);
            println!("=== {name}\n{}", d.to_text(true));
        }
    }
    for path in args {
        let src = std::fs::read_to_string(&path).unwrap();
        let n = fbdecomp::parse_netlist(&src, &Default::default()).unwrap();
        println!("=== {path}\n{}", fbdecomp::decompose(&n).to_text(true));
    }
}
