package math;

/**
 * Closed interval of integers.
 *
 * @param lo lower bound
 * @param hi upper bound
 */
public record Interval(int lo, int hi) implements Comparable<Interval> {
    public Interval {
        if (lo > hi) {
            throw new IllegalArgumentException(lo + " > " + hi);
        }
    }

    public boolean contains(int x) { return lo <= x && x <= hi; }

    public boolean overlaps(Interval o) {
        return lo <= o.hi && o.lo <= hi;
    }

    @Override
    public int compareTo(Interval o) {
        return lo != o.lo ? Integer.compare(lo, o.lo) : Integer.compare(hi, o.hi);
    }
}
