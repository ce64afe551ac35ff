package paint;

// Basic RGB palette.
public enum Color {
    RED(0xFF0000),   // pure red
    GREEN(0x00FF00), // pure green
    BLUE(0x0000FF);  // pure blue

    private final int rgb;

    Color(int rgb) {
        this.rgb = rgb;
    }

    /**
     * Hex form, e.g. {@code "#FF0000"}.
     */
    public String hex() {
        return String.format("#%06X", rgb);
    }

    public static Color parse(String name) {
        return switch (name.toLowerCase()) {
            case "red" -> RED;
            case "green" -> GREEN;
            case "blue" -> BLUE;
            default -> throw new IllegalArgumentException("unknown color: " + name);
        };
    }
}
