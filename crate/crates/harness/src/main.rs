fn main() {
    std::process::exit(mvbv_harness::run(std::env::args_os()));
}
