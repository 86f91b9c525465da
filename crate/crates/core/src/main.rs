fn main() {
    std::process::exit(manip3d::cli::run());
}
