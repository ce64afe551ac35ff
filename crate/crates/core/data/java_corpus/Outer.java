package nest;

public class Outer {
    private int counter;

    /** Inner class with access to the outer instance. */
    public class Inner {
        public void bump() {
            counter++; // outer field
        }

        class Deeper {
            int read() { return counter; }
        }
    }

    /** Static nested builder. */
    public static class Builder {
        private int start;

        public Builder start(int s) { this.start = s; return this; }

        public Outer build() {
            Outer o = new Outer();
            o.counter = start;
            return o;
        }
    }

    public int value() { return counter; }
}
