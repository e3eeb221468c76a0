use clap::Parser;

fn main() -> anyhow::Result<()> {
    let cli = a22_cli::Cli::parse();
    let output = a22_cli::run(cli)?;
    print!("{output}");
    Ok(())
}
