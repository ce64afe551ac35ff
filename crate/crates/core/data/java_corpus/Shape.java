package geometry;

/**
 * Closed two-dimensional shapes.
 */
public sealed interface Shape permits Shape.Circle, Shape.Rect {

    double area();

    /** A circle. */
    record Circle(double radius) implements Shape {
        public Circle {
            if (radius < 0) throw new IllegalArgumentException("radius < 0");
        }

        @Override
        public double area() {
            return Math.PI * radius * radius;
        }
    }

    /** An axis-aligned rectangle. */
    record Rect(double w, double h) implements Shape {
        @Override
        public double area() {
            return w * h; // width times height
        }
    }

    static double totalArea(Iterable<? extends Shape> shapes) {
        double sum = 0;
        for (Shape s : shapes) {
            sum += s.area();
        }
        return sum;
    }
}
