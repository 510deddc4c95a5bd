pub mod coc;
