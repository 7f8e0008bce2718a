//! Compiles and runs every code block in the guide as a doctest, so the book
//! cannot drift from the API.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        mod $name {}
    };
}

chapter!(readme, "../../../README.md");
chapter!(introduction, "../../../book/src/introduction.md");
chapter!(model, "../../../book/src/model.md");
chapter!(preprocessing, "../../../book/src/preprocessing.md");
chapter!(partitioning, "../../../book/src/partitioning.md");
chapter!(search, "../../../book/src/search.md");
chapter!(bounds, "../../../book/src/bounds.md");
chapter!(pair_pruning, "../../../book/src/pair-pruning.md");
chapter!(parallelism, "../../../book/src/parallelism.md");
chapter!(cli, "../../../book/src/cli.md");
chapter!(verification, "../../../book/src/verification.md");
