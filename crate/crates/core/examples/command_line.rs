// Driving the command-line interface in-process.

use mpdc::cli;

pub fn run() -> mpdc::Result<()> {
    let program = concat!(env!("CARGO_MANIFEST_DIR"), "/programs/twin_cones.prog");
    for args in [
        vec!["mpdc", "check", program, "--at", "0,0,0", "--cq", "rcpld"],
        vec!["mpdc", "normal-cone", program, "--at", "0,0,0", "--regular"],
        vec!["mpdc", "reproduce", "omega-e-cones"],
    ] {
        let out = cli::run(&args);
        println!("$ {} -> exit {}", args[1..].join(" "), out.code);
        print!("{}", out.stdout);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> mpdc::Result<()> {
    run()
}
