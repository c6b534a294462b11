//! Holds the `acceptance` test target, which re-derives every acceptance
//! criterion from `mcx-core` and prints one PASS/FAIL line per criterion.
