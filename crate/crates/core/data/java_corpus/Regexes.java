package text;

import java.util.regex.Pattern;

public final class Regexes {
    // Patterns full of slashes and stars.
    public static final Pattern BLOCK_COMMENT = Pattern.compile("/\\*.*?\\*/", Pattern.DOTALL);
    public static final Pattern LINE_COMMENT = Pattern.compile("//[^\\n]*");
    public static final Pattern PATH = Pattern.compile("^(/[a-z]+)+/?$"); // unix path
    public static final String STARS = "**/*.java";

    private Regexes() {}

    public static String stripComments(String src) {
        return LINE_COMMENT.matcher(BLOCK_COMMENT.matcher(src).replaceAll("")).replaceAll("");
    }
}
