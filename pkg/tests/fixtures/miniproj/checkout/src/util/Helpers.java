package app.util;

import java.util.List;
import java.util.Map;
import org.apache.commons.lang3.StringUtils;

public class Helpers {
    public static String join(List<String> parts) {
        return StringUtils.join(parts, ",");
    }
}
