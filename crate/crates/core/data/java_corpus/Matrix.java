package math;

import java.util.Arrays;

/**
 * Dense row-major matrix.
 */
public final class Matrix {
    private final int rows, cols;
    private final double[] data;

    public Matrix(int rows, int cols) {
        this.rows = rows;
        this.cols = cols;
        this.data = new double[rows * cols];
    }

    public double get(int r, int c) { return data[r * cols + c]; }

    public void set(int r, int c, double v) { data[r * cols + c] = v; }

    public Matrix multiply(Matrix o) {
        if (cols != o.rows) throw new IllegalArgumentException("shape mismatch");
        Matrix m = new Matrix(rows, o.cols);
        for (int i = 0; i < rows; i++)
            for (int j = 0; j < o.cols; j++) {
                double s = 0;
                for (int k = 0; k < cols; k++) s += get(i, k) * o.get(k, j); // inner product
                m.set(i, j, s);
            }
        return m;
    }

    @Override
    public boolean equals(Object o) {
        return o instanceof Matrix m && m.rows == rows && m.cols == cols && Arrays.equals(m.data, data);
    }

    @Override
    public int hashCode() { return Arrays.hashCode(data) * 31 + rows; }
}
