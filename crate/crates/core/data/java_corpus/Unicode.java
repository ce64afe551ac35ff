package i18n;

/**
 * Non-ASCII text: déjà vu, naïve, 日本語.
 */
public class Unicode {
    // Ελληνικά comment
    private static final String GREETING = "こんにちは // not a comment";
    private static final char PI = 'π'; /* pi */

    public String greeting() {
        return GREETING + " " + PI; // 😀 emoji in comment
    }
}
