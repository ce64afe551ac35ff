package hello;

/**
 * Windows line endings on purpose.
 */
public class Greeter {
    // greeting prefix
    private final String prefix = "Hello, "; // trailing comment

    public String greet(String name) {
        return prefix + name + "!"; /* exclamation */
    }
}
