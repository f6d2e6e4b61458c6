// Builds one matrix of every family and round-trips it through Matrix Market.

use binary_cs::matrices::{
    construct_array_matrix, construct_devore_matrix, construct_euler_matrix, construct_gaussian_matrix,
    export_matrix, import_matrix, Matrix,
};

pub fn run_example() -> binary_cs::Result<()> {
    let array: Matrix = construct_array_matrix(7, 4)?.into();
    let devore: Matrix = construct_devore_matrix(5, 2)?.into();
    let euler: Matrix = construct_euler_matrix(7, 4)?.into();
    let gaussian: Matrix = construct_gaussian_matrix(28, 49, 1)?.into();

    let dir = tempfile::tempdir().map_err(|e| binary_cs::Error::InvalidParameter(e.to_string()))?;
    for (name, m) in [("array", &array), ("devore", &devore), ("euler", &euler), ("gaussian", &gaussian)] {
        let path = dir.path().join(format!("{name}.mtx"));
        export_matrix(m, &path)?;
        let back = import_matrix(&path)?;
        assert_eq!(&back, m);
        println!("{name:>9}: {} x {}", m.rows(), m.cols());
    }

    // DeVore matrices are usually cut down to the signal length.
    let cut = devore.truncate_columns(100)?;
    println!("truncated devore: {} x {}", cut.rows(), cut.cols());
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
