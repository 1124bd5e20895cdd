use std::io::IsTerminal;

fn main() {
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    let style = fixloc_cli::Style {
        color: !no_color && std::io::stdout().is_terminal(),
    };
    let out = fixloc_cli::run(std::env::args_os(), &mut std::io::stdin().lock(), style);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
