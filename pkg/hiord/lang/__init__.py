"""Surface language: terms, parser, pretty-printer and the prelude library."""
