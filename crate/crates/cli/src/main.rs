fn main() {
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).format_timestamp(None).init();
    std::process::exit(trustnet_cli::dispatch(std::env::args_os()));
}
