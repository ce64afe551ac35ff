package units;

/**
 * Temperature conversions.
 * <pre>
 *   celsius = (fahrenheit - 32) * 5 / 9
 * </pre>
 */
public class Temperature {
    public static double toCelsius(double f) {
        return (f - 32) * 5 / 9;
    }

    public static double toFahrenheit(double c) {
        return c * 9 / 5 + 32; // inverse
    }

    /** Absolute zero in Celsius. */
    public static final double ABSOLUTE_ZERO = -273.15;
}
