//! Figure output: 2D wall-and-chamber SVG, stereographic projection SVG,
//! and DOT exports of mutation graphs and Hasse posets.

