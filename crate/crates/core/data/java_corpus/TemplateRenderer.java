package text;

import java.util.Map;

/**
 * Renders a fixed HTML template. The text block below contains comment
 * markers that must survive stripping.
 */
public class TemplateRenderer {
    private static final String TEMPLATE = """
        <html>
          <!-- header -->
          <body>
            // {{title}}
            /* {{body}} */
          </body>
        </html>
        """;

    public String render(Map<String, String> values) {
        String out = TEMPLATE;
        for (Map.Entry<String, String> e : values.entrySet()) {
            out = out.replace("{{" + e.getKey() + "}}", e.getValue()); // naive
        }
        return out;
    }
}
