fn main() {
    varmax_cli::main_exit()
}
