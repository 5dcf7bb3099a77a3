# pmc subcommand handlers, one module per area
